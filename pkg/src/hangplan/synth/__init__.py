from .dataset import (DatasetConfig, DatasetManifest, SceneEntry, build_dataset,
                      load_entries, load_manifest)
from .families import (OBJECT_FAMILIES, PARAM_RANGES, SUPPORT_FAMILIES, Scene,
                       SceneSpec, generate_scene, sample_scene_spec)
from .sampling import sample_hang_poses

__all__ = [
    "DatasetConfig", "DatasetManifest", "SceneEntry", "build_dataset",
    "load_entries", "load_manifest", "OBJECT_FAMILIES", "PARAM_RANGES",
    "SUPPORT_FAMILIES", "Scene", "SceneSpec", "generate_scene",
    "sample_scene_spec", "sample_hang_poses",
]
