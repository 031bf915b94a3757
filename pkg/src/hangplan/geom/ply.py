"""ASCII PLY import/export for partial clouds (x,y,z,nx,ny,nz,tag)."""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .cloud import TAG_OBJECT, TAG_SUPPORT, PartialCloud

_TAG_CODE = {TAG_OBJECT: 1, TAG_SUPPORT: 0}
_CODE_TAG = {v: k for k, v in _TAG_CODE.items()}


def save_ply(path, cloud: PartialCloud) -> None:
    code = _TAG_CODE[cloud.tag]
    vx, vy, vz = cloud.viewpoint
    lines = [
        "ply",
        "format ascii 1.0",
        f"comment viewpoint {vx:.9g} {vy:.9g} {vz:.9g}",
        f"element vertex {len(cloud)}",
        "property float x",
        "property float y",
        "property float z",
        "property float nx",
        "property float ny",
        "property float nz",
        "property uchar tag",
        "end_header",
    ]
    for p, n in zip(cloud.points, cloud.normals):
        lines.append(f"{p[0]:.9g} {p[1]:.9g} {p[2]:.9g} "
                     f"{n[0]:.9g} {n[1]:.9g} {n[2]:.9g} {code}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def load_ply(path) -> PartialCloud:
    text = Path(path).read_text(encoding="ascii").splitlines()
    viewpoint = np.zeros(3)
    n_vertex = 0
    body_at = 0
    for i, line in enumerate(text):
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "comment" and len(parts) >= 5 and parts[1] == "viewpoint":
            viewpoint = np.array([float(x) for x in parts[2:5]])
        elif parts[0] == "element" and parts[1] == "vertex":
            n_vertex = int(parts[2])
        elif parts[0] == "end_header":
            body_at = i + 1
            break
    rows = [text[body_at + j].split() for j in range(n_vertex)]
    data = np.array([[float(x) for x in r[:6]] for r in rows])
    codes = {int(r[6]) for r in rows} if rows and len(rows[0]) > 6 else {1}
    if len(codes) != 1:
        raise ValueError("mixed per-point tags in PLY file")
    tag = _CODE_TAG[codes.pop()]
    if n_vertex == 0:
        return PartialCloud(np.zeros((0, 3)), np.zeros((0, 3)), tag, viewpoint)
    return PartialCloud(data[:, :3], data[:, 3:6], tag, viewpoint)
