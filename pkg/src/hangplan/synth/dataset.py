"""Dataset generation: scenes, partial clouds, annotations, manifest."""
from __future__ import annotations

import hashlib
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from ..geom.cloud import TAG_OBJECT, TAG_SUPPORT, PartialCloud, transform_cloud
from ..geom.pose import Pose, identity
from ..geom.ply import load_ply, save_ply
from ..geom.render import render_partial_cloud
from ..geom.trimesh import load_obj, save_obj
from ..sim.contacts import ContactPair, annotate_cloud_contacts, extract_contacts
from ..sim.scene import Body, HangScene
from .families import Scene, SceneSpec, generate_scene
from .sampling import sample_hang_poses

DATASET_VERSION = "1"


@dataclass(frozen=True)
class DatasetConfig:
    seed: int = 0
    samples_per_scene: int = 40
    cloud_points: int = 1024
    resolution: tuple[int, int] = (160, 120)
    score_radius: float = 0.012
    train_fraction: float = 0.8
    jobs: int = 1

    def to_dict(self) -> dict:
        # The worker count is execution machinery: outputs are identical for
        # any value, so it stays out of the content echo.
        d = asdict(self)
        d["resolution"] = list(self.resolution)
        d.pop("jobs")
        return d


@dataclass
class DatasetManifest:
    version: str
    config: dict
    entries: list[dict] = field(default_factory=list)
    warnings: list[dict] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps({"version": self.version, "config": self.config,
                           "entries": self.entries, "warnings": self.warnings},
                          sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "DatasetManifest":
        d = json.loads(text)
        return cls(d["version"], d["config"], d["entries"], d["warnings"])

    def split_entries(self, split: str) -> list[dict]:
        return [e for e in self.entries if e["split"] == split]


def _camera_position(center: np.ndarray, radius: float,
                     rng: np.random.Generator) -> np.ndarray:
    azimuth = rng.uniform(-np.pi / 3.0, np.pi / 3.0)
    elevation = rng.uniform(np.deg2rad(10.0), np.deg2rad(45.0))
    direction = np.array([np.cos(elevation) * np.cos(azimuth),
                          np.cos(elevation) * np.sin(azimuth),
                          np.sin(elevation)])
    return center + direction * radius


def pose_to_json(pose: Pose) -> dict:
    return {"rotation": [float(x) for x in pose.rotation],
            "translation": [float(x) for x in pose.translation]}


def pose_from_json(d: dict) -> Pose:
    return Pose(d["rotation"], d["translation"])


def _contact_to_json(c: ContactPair) -> dict:
    return {"object_point": [float(x) for x in c.object_point],
            "support_point": [float(x) for x in c.support_point],
            "distance": float(c.distance)}


def contact_from_json(d: dict) -> ContactPair:
    return ContactPair(np.array(d["object_point"]),
                       np.array(d["support_point"]), d["distance"])


def build_scene_data(spec: SceneSpec, cfg: DatasetConfig):
    """Generate one scene end to end: meshes, clouds, stable annotated poses."""
    scene = generate_scene(spec)
    sim = HangScene(Body(scene.obj_mesh), Body(scene.support_mesh))
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, spec.seed, 17]))

    lo, hi = scene.support_mesh.bounds()
    sup_center = 0.5 * (lo + hi)
    sup_radius = 0.5 * float(np.linalg.norm(hi - lo))
    cam_support = _camera_position(sup_center, 2.2 * sup_radius + 0.12, rng)
    olo, ohi = scene.obj_mesh.bounds()
    obj_center = 0.5 * (olo + ohi)
    obj_radius = 0.5 * float(np.linalg.norm(ohi - olo))
    cam_object = _camera_position(obj_center, 2.6 * obj_radius + 0.08, rng)

    sup_cloud = render_partial_cloud(scene.support_mesh, identity(), cam_support,
                                     cfg.resolution, tag=TAG_SUPPORT)
    obj_cloud = render_partial_cloud(scene.obj_mesh, identity(), cam_object,
                                     cfg.resolution, tag=TAG_OBJECT)
    sub_seed = int(rng.integers(2 ** 31))
    sup_cloud = sup_cloud.subsample(cfg.cloud_points, sub_seed)
    obj_cloud = obj_cloud.subsample(cfg.cloud_points, sub_seed + 1)

    poses = sample_hang_poses(scene, sim, cfg.samples_per_scene,
                              rng_seed=spec.seed & 0x7FFFFFFF)
    tau = 2.0 * sim.cell
    annotations = []
    for pose in poses:
        contacts = extract_contacts(sim, pose, tau)
        s_obj, s_sup, pairs = annotate_cloud_contacts(
            contacts, transform_cloud(pose, obj_cloud), sup_cloud,
            cfg.score_radius)
        annotations.append({
            **pose_to_json(pose),
            "contacts": [_contact_to_json(c) for c in contacts],
            "object_scores": [float(x) for x in s_obj],
            "support_scores": [float(x) for x in s_sup],
            "positive_pairs": [[int(u), int(v)] for u, v in pairs],
            "removable": True,
        })
    return scene, sim, obj_cloud, sup_cloud, {
        "version": DATASET_VERSION,
        "scene_id": spec.scene_id,
        "spec": _spec_to_json(spec),
        "contact_radius": tau,
        "score_radius": cfg.score_radius,
        "cameras": {"object": [float(x) for x in cam_object],
                    "support": [float(x) for x in cam_support]},
        "hang_segment": [[float(x) for x in p] for p in scene.hang_segment],
        "object_feature": [float(x) for x in scene.object_feature],
        "poses": annotations,
    }


def _spec_to_json(spec: SceneSpec) -> dict:
    return {"scene_id": spec.scene_id, "object_family": spec.object_family,
            "support_family": spec.support_family,
            "object_params": dict(spec.object_params),
            "support_params": dict(spec.support_params), "seed": spec.seed}


def spec_from_json(d: dict) -> SceneSpec:
    return SceneSpec(d["scene_id"], d["object_family"], d["support_family"],
                     d["object_params"], d["support_params"], d["seed"])


def _write_text(path: Path, text: str) -> None:
    try:
        path.write_text(text, encoding="ascii")
    except OSError as e:
        raise OSError(f"failed writing {path}: {e}") from e


def _build_scene_job(args):
    spec_json, out_root, cfg_dict = args
    spec = spec_from_json(spec_json)
    cfg_dict = dict(cfg_dict)
    cfg_dict["resolution"] = tuple(cfg_dict["resolution"])
    cfg = DatasetConfig(**cfg_dict)
    scene, _, obj_cloud, sup_cloud, annotation = build_scene_data(spec, cfg)
    if not annotation["poses"]:
        return {"id": spec.scene_id, "excluded": True,
                "reason": "no stable removable pose found"}
    scene_dir = Path(out_root) / "scenes" / spec.scene_id
    scene_dir.mkdir(parents=True, exist_ok=True)
    try:
        save_obj(scene_dir / "object.obj", scene.obj_mesh)
        save_obj(scene_dir / "support.obj", scene.support_mesh)
        save_ply(scene_dir / "object.ply", obj_cloud)
        save_ply(scene_dir / "support.ply", sup_cloud)
    except OSError as e:
        raise OSError(f"failed writing scene files under {scene_dir}: {e}") from e
    _write_text(scene_dir / "annotation.json",
                json.dumps(annotation, sort_keys=True, indent=2))
    rel = f"scenes/{spec.scene_id}"
    return {"id": spec.scene_id, "excluded": False,
            "object_obj": f"{rel}/object.obj", "support_obj": f"{rel}/support.obj",
            "object_ply": f"{rel}/object.ply", "support_ply": f"{rel}/support.ply",
            "annotation": f"{rel}/annotation.json",
            "n_poses": len(annotation["poses"])}


def build_dataset(specs: list[SceneSpec], out_root,
                  cfg: DatasetConfig | None = None) -> DatasetManifest:
    """Build every scene, write files, and assemble the manifest.

    Scene jobs run in a fixed-size worker pool; per-scene randomness is
    seeded from the spec, so outputs are identical for any job count.
    Scenes with no stable removable pose are excluded with a warning.
    """
    cfg = cfg or DatasetConfig()
    out_root = Path(out_root)
    out_root.mkdir(parents=True, exist_ok=True)
    jobs = [(_spec_to_json(s), str(out_root), cfg.to_dict()) for s in specs]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_build_scene_job, jobs))
    else:
        results = [_build_scene_job(j) for j in jobs]

    manifest = DatasetManifest(DATASET_VERSION, cfg.to_dict())
    included = [r for r in results if not r["excluded"]]
    for r in results:
        if r["excluded"]:
            manifest.warnings.append({"id": r["id"], "reason": r["reason"]})

    ranked = sorted(included, key=lambda r: (_split_hash(r["id"]), r["id"]))
    n_train = int(round(cfg.train_fraction * len(ranked)))
    train_ids = {r["id"] for r in ranked[:n_train]}
    for r in included:
        entry = dict(r)
        entry.pop("excluded")
        entry["split"] = "train" if r["id"] in train_ids else "test"
        manifest.entries.append(entry)
    _write_text(out_root / "manifest.json", manifest.to_json())
    return manifest


def _split_hash(scene_id: str) -> int:
    return int(hashlib.sha256(scene_id.encode()).hexdigest()[:16], 16)


def load_manifest(root) -> DatasetManifest:
    return DatasetManifest.from_json((Path(root) / "manifest.json").read_text())


class SceneEntry:
    """Lazy accessor for one dataset scene's files and simulation bodies."""

    def __init__(self, root, entry: dict):
        self.root = Path(root)
        self.entry = entry
        self._cache: dict = {}

    @property
    def scene_id(self) -> str:
        return self.entry["id"]

    @property
    def annotation(self) -> dict:
        if "ann" not in self._cache:
            self._cache["ann"] = json.loads(
                (self.root / self.entry["annotation"]).read_text())
        return self._cache["ann"]

    @property
    def spec(self) -> SceneSpec:
        return spec_from_json(self.annotation["spec"])

    @property
    def object_cloud(self) -> PartialCloud:
        if "oc" not in self._cache:
            self._cache["oc"] = load_ply(self.root / self.entry["object_ply"])
        return self._cache["oc"]

    @property
    def support_cloud(self) -> PartialCloud:
        if "sc" not in self._cache:
            self._cache["sc"] = load_ply(self.root / self.entry["support_ply"])
        return self._cache["sc"]

    @property
    def stable_poses(self) -> list[Pose]:
        return [pose_from_json(p) for p in self.annotation["poses"]]

    @property
    def sim(self) -> HangScene:
        if "sim" not in self._cache:
            obj = load_obj(self.root / self.entry["object_obj"])
            sup = load_obj(self.root / self.entry["support_obj"])
            self._cache["sim"] = HangScene(Body(obj), Body(sup))
        return self._cache["sim"]


def load_entries(root, split: str | None = None) -> list[SceneEntry]:
    manifest = load_manifest(root)
    entries = manifest.entries if split is None else manifest.split_entries(split)
    return [SceneEntry(root, e) for e in entries]
