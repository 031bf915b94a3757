from .cloud import PartialCloud, estimate_normals, transform_cloud
from .collide import mesh_collide
from .kdindex import KdIndex
from .ply import load_ply, save_ply
from .pose import Pose, compose, identity, inverse
from .render import render_partial_cloud, render_scene
from .sdf import SdfGrid, build_sdf
from .trimesh import TriMesh, load_obj, merge_meshes, save_obj

__all__ = [
    "PartialCloud", "estimate_normals", "transform_cloud", "mesh_collide",
    "KdIndex", "load_ply", "save_ply", "Pose", "compose", "identity",
    "inverse", "render_partial_cloud", "render_scene", "SdfGrid", "build_sdf",
    "TriMesh", "load_obj", "merge_meshes", "save_obj",
]
