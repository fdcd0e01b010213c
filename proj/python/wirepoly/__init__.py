"""Wireframe room-layout polygon detection toolkit.

Thin Python surface over the C++ core: scene parsing, polygon enumeration,
minimum-average-weight proposals, synthetic wireframes, NMS, evaluation,
and SVG rendering.
"""

from pathlib import Path

from ._core import (
    LimitExceeded,
    ParseError,
    Scene,
    anchor_grid,
    detections_from_json,
    detections_to_json,
    enumerate_polygons,
    evaluate_dirs,
    generate_synthetic,
    line_distance,
    nms,
    oracle_detections,
    oracle_scores,
    parse_scene,
    polygon_area,
    polygon_centroid,
    polygon_iou,
    polygon_is_simple,
    propose,
    render_svg,
    scene_to_json,
)

__all__ = [
    "LimitExceeded",
    "ParseError",
    "Scene",
    "anchor_grid",
    "detections_from_json",
    "detections_to_json",
    "enumerate_polygons",
    "evaluate_dirs",
    "generate_synthetic",
    "line_distance",
    "load_scene",
    "nms",
    "oracle_detections",
    "oracle_scores",
    "parse_scene",
    "polygon_area",
    "polygon_centroid",
    "polygon_iou",
    "polygon_is_simple",
    "propose",
    "render_svg",
    "save_scene",
    "scene_to_json",
]

__version__ = "0.1.0"


def load_scene(path):
    """Read and validate a scene JSON file."""
    return parse_scene(Path(path).read_text(encoding="utf-8"))


def save_scene(scene, path):
    """Write a scene to a JSON file."""
    Path(path).write_text(scene_to_json(scene), encoding="utf-8")
