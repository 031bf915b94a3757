"""Procedural object/support families and scene construction.

All sizes are meters, desk scale.  Supports are anchored with their mounting
frame at the origin: the wall occupies x <= 0 (free-standing racks sit on
the z = 0 plane) and gravity points along -z.  Generation is a pure function
of the spec parameters, so identical specs rebuild byte-identical meshes.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..geom.pose import Pose
from ..geom.trimesh import TriMesh, merge_meshes
from . import primitives as prim

SUPPORT_FAMILIES = ("WallHook", "LHook", "SHook", "RackBar", "Peg")
OBJECT_FAMILIES = ("Ring", "Mug", "HandleTool", "Headphone", "CapBrim")

# Per-family parameter ranges (inclusive).  Ranges are matched so every
# object family has at least one support family it can hang on.
PARAM_RANGES: dict[str, dict[str, tuple[float, float]]] = {
    "WallHook": {"rod_len": (0.08, 0.14), "rod_radius": (0.004, 0.007),
                 "tip_len": (0.015, 0.028), "tilt_deg": (5.0, 15.0)},
    "LHook": {"height": (0.10, 0.16), "arm_len": (0.07, 0.12),
              "radius": (0.004, 0.008)},
    "SHook": {"loop_radius": (0.025, 0.04), "radius": (0.004, 0.006),
              "height": (0.14, 0.18), "stem_len": (0.03, 0.05)},
    "RackBar": {"width": (0.12, 0.20), "height": (0.12, 0.18),
                "radius": (0.005, 0.009)},
    "Peg": {"length": (0.05, 0.09), "radius": (0.005, 0.009),
            "angle_deg": (15.0, 35.0), "height": (0.10, 0.16)},
    "Ring": {"major_radius": (0.03, 0.05), "tube_radius": (0.006, 0.012)},
    "Mug": {"body_radius": (0.03, 0.04), "body_height": (0.07, 0.10),
            "handle_radius": (0.024, 0.030)},
    "HandleTool": {"handle_len": (0.12, 0.18), "handle_radius": (0.008, 0.012),
                   "head_width": (0.05, 0.08), "hole_radius": (0.018, 0.024)},
    "Headphone": {"band_radius": (0.07, 0.09), "band_tube": (0.006, 0.008),
                  "cup_radius": (0.02, 0.028)},
    "CapBrim": {"crown_radius": (0.035, 0.045), "loop_radius": (0.020, 0.026)},
}

# Support families each object family can plausibly hang on.
HANGABLE_SUPPORTS: dict[str, tuple[str, ...]] = {
    "Ring": ("WallHook", "LHook", "SHook", "RackBar", "Peg"),
    "Mug": ("WallHook", "LHook", "SHook", "Peg"),
    "HandleTool": ("WallHook", "LHook", "SHook", "Peg"),
    "Headphone": ("RackBar", "LHook"),
    "CapBrim": ("WallHook", "Peg"),
}


@dataclass(frozen=True)
class SceneSpec:
    scene_id: str
    object_family: str
    support_family: str
    object_params: dict = field(default_factory=dict)
    support_params: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.object_family not in OBJECT_FAMILIES:
            raise ValueError(f"unknown object family {self.object_family!r}")
        if self.support_family not in SUPPORT_FAMILIES:
            raise ValueError(f"unknown support family {self.support_family!r}")
        for family, params in ((self.object_family, self.object_params),
                               (self.support_family, self.support_params)):
            ranges = PARAM_RANGES[family]
            for key, value in params.items():
                if key not in ranges:
                    raise ValueError(f"unknown parameter {key!r} for {family}")
                lo, hi = ranges[key]
                if not lo <= value <= hi:
                    raise ValueError(
                        f"parameter {key}={value} outside [{lo}, {hi}] for {family}")

    def resolved(self, family: str, params: dict) -> dict:
        out = {k: (lo + hi) / 2.0 for k, (lo, hi) in PARAM_RANGES[family].items()}
        out.update(params)
        return out


@dataclass(frozen=True)
class Scene:
    """Generated geometry plus hang-region metadata for pose sampling."""

    spec: SceneSpec
    obj_mesh: TriMesh
    support_mesh: TriMesh
    hang_segment: np.ndarray      # (2, 3): where objects are proposed
    object_feature: np.ndarray    # (3,): object-local point brought to the segment
    feature_axis: np.ndarray      # (3,): object-local direction a rod threads


def _wall_plate(width: float = 0.14, height: float = 0.18) -> TriMesh:
    return prim.box([0.012, width, height], center=[-0.006, 0.0, height / 2.0])


def _support_wallhook(p: dict):
    tilt = np.deg2rad(p["tilt_deg"])
    base = np.array([0.0, 0.0, 0.12])
    tip = base + p["rod_len"] * np.array([np.cos(tilt), 0.0, np.sin(tilt)])
    parts = [_wall_plate(), prim.cylinder(base - [0.005, 0, 0], tip,
                                          p["rod_radius"], 12)]
    parts.append(prim.cylinder(tip, tip + [0.0, 0.0, p["tip_len"]],
                               p["rod_radius"], 12))
    seg = np.array([base + 0.2 * (tip - base), base + 0.85 * (tip - base)])
    return merge_meshes(parts, "wallhook"), seg


def _support_lhook(p: dict):
    h = p["height"]
    post0 = np.array([0.02, 0.0, 0.01])
    post1 = np.array([0.02, 0.0, h])
    arm1 = post1 + [p["arm_len"], 0.0, 0.0]
    parts = [_wall_plate(height=h + 0.03),
             prim.cylinder(post0 - [0.012, 0, 0], post1, p["radius"], 12),
             prim.cylinder(post1 - [0.004, 0, 0], arm1, p["radius"], 12)]
    seg = np.array([post1 + 0.25 * (arm1 - post1), post1 + 0.85 * (arm1 - post1)])
    return merge_meshes(parts, "lhook"), seg


def _support_shook(p: dict):
    a = p["loop_radius"]
    h = p["height"]
    s = p["stem_len"]
    r = p["radius"]
    rot = Pose([np.pi / 2.0, 0.0, 0.0])   # xy-plane arcs -> xz-plane
    upper = prim.torus_arc(a, r, -np.pi / 2.0, np.pi / 2.0,
                           segments=12).transformed(rot)
    lower = prim.torus_arc(a, r, np.pi / 2.0, 1.75 * np.pi,
                           segments=16).transformed(rot)
    parts = [
        _wall_plate(height=h + 0.03),
        prim.cylinder([-0.005, 0.0, h], [s, 0.0, h], r, 12),
        upper.transformed(Pose([0, 0, 0], [s, 0.0, h - a])),
        lower.transformed(Pose([0, 0, 0], [s, 0.0, h - 3.0 * a])),
    ]
    low = np.array([s, 0.0, h - 4.0 * a])
    seg = np.array([low + [-0.3 * a, 0.0, 0.05 * a], low + [0.3 * a, 0.0, 0.05 * a]])
    return merge_meshes(parts, "shook"), seg


def _support_rackbar(p: dict):
    # No base slab: a horizontal surface under the bar would collect
    # objects resting on it instead of hanging.
    w, h, r = p["width"], p["height"], p["radius"]
    x = 0.06
    parts = []
    for sy in (-1.0, 1.0):
        parts.append(prim.cylinder([x, sy * w / 2.0, 0.0],
                                   [x, sy * w / 2.0, h], r * 1.2, 12))
    parts.append(prim.cylinder([x, -w / 2.0 - 0.005, h], [x, w / 2.0 + 0.005, h],
                               r, 12))
    seg = np.array([[x, -0.35 * w, h], [x, 0.35 * w, h]])
    return merge_meshes(parts, "rackbar"), seg


def _support_peg(p: dict):
    ang = np.deg2rad(p["angle_deg"])
    h = p["height"]
    base = np.array([0.0, 0.0, h])
    tip = base + p["length"] * np.array([np.cos(ang), 0.0, np.sin(ang)])
    parts = [_wall_plate(height=h + 0.05),
             prim.cylinder(base - [0.005, 0, 0], tip, p["radius"], 12)]
    seg = np.array([base + 0.15 * (tip - base), base + 0.75 * (tip - base)])
    return merge_meshes(parts, "peg"), seg


def _object_ring(p: dict):
    mesh = prim.torus(p["major_radius"], p["tube_radius"],
                      segments=24, tube_segments=12, name="ring")
    return mesh, np.zeros(3), np.array([0.0, 0.0, 1.0])


def _object_mug(p: dict):
    rb, hb = p["body_radius"], p["body_height"]
    rh = p["handle_radius"]
    body = prim.cylinder([0, 0, -hb / 2.0], [0, 0, hb / 2.0], rb, 16)
    rot = Pose([np.pi / 2.0, 0.0, 0.0])
    handle = prim.torus_arc(rh, 0.006, -0.64 * np.pi, 0.64 * np.pi,
                            segments=14).transformed(rot)
    handle = handle.transformed(Pose([0, 0, 0], [rb + 0.004, 0.0, 0.0]))
    mesh = merge_meshes([body, handle], "mug")
    return mesh, np.array([rb + 0.004 + 0.4 * rh, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])


def _object_handletool(p: dict):
    lh, rh = p["handle_len"], p["handle_radius"]
    hole_r = p["hole_radius"]
    handle = prim.cylinder([0, 0, -lh / 2.0], [0, 0, lh / 2.0], rh, 12)
    head = prim.box([p["head_width"], 0.03, 0.028], center=[0.0, 0.0, lh / 2.0])
    loop = prim.torus(hole_r, 0.004, segments=18, tube_segments=8)
    loop = loop.transformed(Pose([np.pi / 2.0, 0.0, 0.0],
                                 [0.0, 0.0, -lh / 2.0]))
    mesh = merge_meshes([handle, head, loop], "handletool")
    return mesh, np.array([0.0, 0.0, -lh / 2.0 - 0.55 * hole_r]), np.array([0.0, 1.0, 0.0])


def _object_headphone(p: dict):
    rb, tube = p["band_radius"], p["band_tube"]
    rot = Pose([np.pi / 2.0, 0.0, 0.0])
    band = prim.torus_arc(rb, tube, np.deg2rad(15.0), np.deg2rad(165.0),
                          segments=18).transformed(rot)
    parts = [band]
    for ang in (np.deg2rad(15.0), np.deg2rad(165.0)):
        c = rb * np.array([np.cos(ang), 0.0, np.sin(ang)])
        parts.append(prim.cylinder(c + [0, -0.012, 0], c + [0, 0.012, 0],
                                   p["cup_radius"], 14))
    return merge_meshes(parts, "headphone"), np.array([0.0, 0.0, rb]), np.array([0.0, 1.0, 0.0])


def _object_capbrim(p: dict):
    rc = p["crown_radius"]
    rl = p["loop_radius"]
    crown = prim.uv_sphere(rc, segments=16, rings=8, name="crown")
    crown = TriMesh(crown.vertices * np.array([1.0, 1.0, 0.6]),
                    crown.triangles, "crown")
    brim = prim.cylinder([rc * 0.8, 0.0, -rc * 0.30], [rc * 0.8, 0.0, -rc * 0.26],
                         rc * 0.9, 16)
    # Back loop in the xz-plane (hole axis lateral): its near side welds
    # into the crown while the hole stays clear for a hook to thread.
    center = np.array([-rc - 0.6 * rl, 0.0, 0.0])
    loop = prim.torus(rl, 0.0035, segments=16, tube_segments=8)
    loop = loop.transformed(Pose([np.pi / 2.0, 0.0, 0.0], center))
    mesh = merge_meshes([crown, brim, loop], "capbrim")
    return mesh, center, np.array([0.0, 1.0, 0.0])


_SUPPORT_BUILDERS = {
    "WallHook": _support_wallhook,
    "LHook": _support_lhook,
    "SHook": _support_shook,
    "RackBar": _support_rackbar,
    "Peg": _support_peg,
}
_OBJECT_BUILDERS = {
    "Ring": _object_ring,
    "Mug": _object_mug,
    "HandleTool": _object_handletool,
    "Headphone": _object_headphone,
    "CapBrim": _object_capbrim,
}


def generate_scene(spec: SceneSpec) -> Scene:
    """Build watertight object and support meshes from a validated spec."""
    sp = spec.resolved(spec.support_family, spec.support_params)
    op = spec.resolved(spec.object_family, spec.object_params)
    support, segment = _SUPPORT_BUILDERS[spec.support_family](sp)
    obj, feature, axis = _OBJECT_BUILDERS[spec.object_family](op)
    return Scene(spec, obj, support, np.asarray(segment, dtype=float),
                 np.asarray(feature, dtype=float),
                 np.asarray(axis, dtype=float))


def sample_scene_spec(index: int, seed: int) -> SceneSpec:
    """Random families and parameters, deterministic in (index, seed)."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, index]))
    obj_family = OBJECT_FAMILIES[rng.integers(len(OBJECT_FAMILIES))]
    supports = HANGABLE_SUPPORTS[obj_family]
    sup_family = supports[rng.integers(len(supports))]

    def draw(family):
        return {k: float(rng.uniform(lo, hi))
                for k, (lo, hi) in PARAM_RANGES[family].items()}

    scene_id = f"{obj_family.lower()}_{sup_family.lower()}_{index:04d}"
    return SceneSpec(scene_id, obj_family, sup_family,
                     draw(obj_family), draw(sup_family),
                     seed=int(rng.integers(2 ** 62)))
