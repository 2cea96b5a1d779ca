"""Layered architecture configurations: semantics, updates and dependencies."""

from .dependency import (DependencyRelation, TheoremReport, check_theorems, dependents_of,
                         find_semantic_witness, is_usable, reflexive_transitive_closure,
                         semantic_dependency, semantic_dependency_relation, syntactic_dependency,
                         transitive_closure)
from .errors import (BudgetExceededError, DocumentError, InvalidConfigurationError, LayerSemError,
                     ModelError, TypeViolationError, UnknownLayerError, UnknownPortError)
from .fixtures import fixture, modular_mult_universe
from .generate import Bounds, random_configuration
from .model import (BehaviorTable, Configuration, Layer, Universe, Valuation, make_valuation,
                    open_inputs, ports_all, ports_in, ports_out, project, validate_configuration,
                    validate_layer, valuation_space)
from .semantics import (attachment_closure, config_semantics, consistent_valuations,
                        semantics_table)
from .update import UpdateSpec, update_configuration, update_layer

__version__ = "0.1.0"
