"""Target project skeleton: construction, emission, validation, insertion."""

from fragport.skeleton.build import (
    FieldStub, MethodStub, ModulePlan, SkeletonClass, SkeletonProject, build_skeleton,
    mangle, snake_case,
)
from fragport.skeleton.emit import (
    MANIFEST_NAME, emit_skeleton, load_manifest, save_manifest,
)
from fragport.skeleton.imports import resolve_circular_imports
from fragport.skeleton.insert import insert_fragment
from fragport.skeleton.validate import (
    list_modules, module_name_of, remove_module_with_repair, validate_module,
    validate_skeleton,
)

__all__ = [
    "FieldStub", "MANIFEST_NAME", "MethodStub", "ModulePlan", "SkeletonClass",
    "SkeletonProject", "build_skeleton", "emit_skeleton", "insert_fragment",
    "list_modules", "load_manifest", "mangle", "module_name_of",
    "remove_module_with_repair", "resolve_circular_imports", "save_manifest",
    "snake_case", "validate_module", "validate_skeleton",
]
