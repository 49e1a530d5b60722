"""Bundled datasets and their end-to-end pipelines."""

from .demos import (
    example1_resolution,
    example1_space,
    example2_resolution,
    example2_space,
    example3_route,
    example3_space,
    space_compat_table,
)
from .educational import (
    DEFAULT_ARC_CAP,
    DEFAULT_TIME_CAP,
    DiscrepancyRecord,
    EduResult,
    GeneralizedTemplate,
    REFERENCE_ROUTES,
    TEMPLATES,
    TieClass,
    audit_reference_routes,
    edu_pipeline,
    load_space,
    template_routes,
)
from .loaders import data_path, load, load_raw
from .medical import individual_script_path, load_scheme, medical_pipeline, point_composites
from .startup import load_scenario, startup_pipeline

__all__ = [
    "DEFAULT_ARC_CAP",
    "DEFAULT_TIME_CAP",
    "DiscrepancyRecord",
    "EduResult",
    "GeneralizedTemplate",
    "REFERENCE_ROUTES",
    "TEMPLATES",
    "TieClass",
    "audit_reference_routes",
    "data_path",
    "edu_pipeline",
    "example1_resolution",
    "example1_space",
    "example2_resolution",
    "example2_space",
    "example3_route",
    "example3_space",
    "individual_script_path",
    "load",
    "load_raw",
    "load_scenario",
    "load_scheme",
    "load_space",
    "medical_pipeline",
    "point_composites",
    "space_compat_table",
    "startup_pipeline",
    "template_routes",
]
