"""Constructive local girth list colouring of plane graphs."""

from .canvas import Canvas, check_colouring, validate_canvas
from .engine import (
    AssignmentInvalid,
    CanvasInvalid,
    Engine,
    EngineIncomplete,
    EngineInvariantError,
    EngineTrace,
    NoReductionApplies,
    PhiImproper,
    colour,
    extend,
    find_deletable_path,
    reduce_once,
)
from .girth import INF, girth_profile
from .plane_graph import PlaneGraph
from .serialize import Instance, dumps, load, loads, store, to_dot
from .wheels import ExceptionCertificate, WheelCertificate, classify_exception

__all__ = [
    "AssignmentInvalid",
    "Canvas",
    "CanvasInvalid",
    "Engine",
    "EngineIncomplete",
    "EngineInvariantError",
    "EngineTrace",
    "ExceptionCertificate",
    "INF",
    "Instance",
    "NoReductionApplies",
    "PhiImproper",
    "PlaneGraph",
    "WheelCertificate",
    "check_colouring",
    "classify_exception",
    "colour",
    "dumps",
    "extend",
    "find_deletable_path",
    "girth_profile",
    "load",
    "loads",
    "reduce_once",
    "store",
    "to_dot",
    "validate_canvas",
]
