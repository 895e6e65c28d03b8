"""Finite categorical databases: schemas as category presentations,
instances as set-valued functors, and data migration along schema
morphisms."""

from .errors import CatDBError
from .graph import Graph, Path
from .instance import Instance, InstanceMorphism, validate_instance
from .schema import Schema, SchemaMorphism, hom_set, paths_equal

__all__ = ["CatDBError", "Graph", "Instance", "InstanceMorphism", "Path", "Schema",
           "SchemaMorphism", "hom_set", "paths_equal", "validate_instance"]
