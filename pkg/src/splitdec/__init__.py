"""splitdec: exact split decompositions of Q-polynomial association schemes.

The package computes, in exact arithmetic over Q(q) with q^2 = b, the
Bose-Mesner and dual Bose-Mesner data of a distance-regular graph, its four
split decompositions with their projectors, the irreducible module
decomposition of the standard module, and the eight-matrix / q-tetrahedron
structure attached to graphs with classical parameters.

Public names are re-exported lazily from the submodules.
"""

from __future__ import annotations

_EXPORTS = {
    # field / scalars
    "GroundField": "field",
    "Scalar": "field",
    "as_scalar": "field",
    "embed": "field",
    "RATIONAL": "field",
    "QUADRATIC": "field",
    # dense exact matrices
    "Mat": "matrix",
    "hstack": "matrix",
    "vstack": "matrix",
    "rref": "matrix",
    "rref_rank_kernel": "matrix",
    "kernel": "matrix",
    "rank": "matrix",
    "rcef": "matrix",
    "inverse": "matrix",
    "solve": "matrix",
    # subspaces
    "Subspace": "subspace",
    "coordinate_subspace": "subspace",
    "projector_from_direct_sum": "subspace",
    "all_projectors_from_direct_sum": "subspace",
    "direct_sum_basis": "subspace",
    # graphs
    "Graph": "graphs",
    "FiniteField": "graphs",
    "hamming": "graphs",
    "johnson": "graphs",
    "cycle": "graphs",
    "bilinear_forms": "graphs",
    "hermitian_forms": "graphs",
    "graph_from_spec": "graphs",
    "graph_from_file": "graphs",
    "parse_graph_file": "graphs",
    "parse_graph_text": "graphs",
    "DistanceData": "graphs",
    "IntersectionData": "graphs",
    "distance_data": "graphs",
    "intersection_numbers": "graphs",
    # association scheme / dual data
    "SchemeData": "scheme",
    "DualData": "scheme",
    "scheme_data": "scheme",
    "dual_data": "scheme",
    "required_field_b": "scheme",
    "eigenvalues_A1": "scheme",
    "find_qpoly_orderings": "scheme",
    "check_self_dual": "scheme",
    # errors raised by the scheme layer
    "NegativeKrein": "errors",
    "NonConstantOnSphere": "errors",
    "ProductRuleViolation": "errors",
    # split decompositions
    "GRID_LABELS": "split",
    "SplitGrid": "split",
    "SplitSystem": "split",
    "split_cell": "split",
    "split_decomposition": "split",
    "verify_split_suite": "split",
    "verify_scheme_suite": "scheme",
    # T-modules
    "TModule": "tmodules",
    "decompose": "tmodules",
    "module_stats": "tmodules",
    "module_inventory": "tmodules",
    "check_module_cells": "tmodules",
    "displacement_cross_check": "tmodules",
    "commutant_dimension": "tmodules",
    "verify_tmodule_suite": "tmodules",
    # classical parameters / q-tetrahedron
    "ClassicalParams": "qtet",
    "detect_classical": "qtet",
    "QTetSystem": "qtet",
    "build_AAstar": "qtet",
    "build_six": "qtet",
    "build_qtet_system": "qtet",
    "build_generators": "qtet",
    "Probe": "qtet",
    "parse_probe": "qtet",
    "relation_instances": "qtet",
    "verify_qtet_suite": "qtet",
    "GENERATOR_NAMES": "qtet",
    "MATRIX_NAMES": "qtet",
    # reports
    "SCHEMA": "report",
    "build_report": "report",
    "canonical_json": "report",
    "checks_bytes": "report",
    "write_report": "report",
    "summarize": "report",
    "all_executed_pass": "report",
    # cache
    "Cache": "cache",
    "split_key": "cache",
    "qtet_key": "cache",
    "scheme_fingerprint": "cache",
    "split_payload": "cache",
    "split_from_payload": "cache",
    "qtet_payload": "cache",
    # cli
    "RunConfig": "cli",
    "Pipeline": "cli",
    "run_verify": "cli",
    "main": "cli",
    # errors
    "SplitdecError": "errors",
    "DivideByZero": "errors",
    "CalledInRationalMode": "errors",
    "FieldMismatch": "errors",
    "ShapeMismatch": "errors",
    "AmbientMismatch": "errors",
    "SingularMatrix": "errors",
    "NotADirectSum": "errors",
    "ScalarParseError": "errors",
    "ParseError": "errors",
    "Disconnected": "errors",
    "LoopOrMultiEdge": "errors",
    "NotDistanceRegular": "errors",
    "UnsupportedFieldOrder": "errors",
    "UnsupportedOrder": "errors",
    "DegenerateParameters": "errors",
    "EigenvalueNotInField": "errors",
    "PropertyViolation": "errors",
    "NotQPolynomial": "errors",
    "NotSelfDual": "errors",
    "CrossExpressionMismatch": "errors",
    "NotFullySplit": "errors",
    "NonContiguousSupport": "errors",
    "NotClassical": "errors",
    "NotClassicalAlphaBMinusOne": "errors",
    "BEqualsOne": "errors",
    "AmbiguousClassical": "errors",
    "EigenvalueShapeMismatch": "errors",
    "AlphaFitFailure": "errors",
    "IndexOutOfRange": "errors",
    "SpectralMismatch": "errors",
    "TableViolation": "errors",
    "SingularFactor": "errors",
    "SuiteInapplicable": "errors",
    "ReportInvariantViolation": "errors",
    "CacheCorrupt": "errors",
    "ConfigError": "errors",
}

__all__ = sorted(_EXPORTS)
__version__ = "0.1.0"


def __getattr__(name):
    try:
        modname = _EXPORTS[name]
    except KeyError:
        raise AttributeError(f"module 'splitdec' has no attribute {name!r}") from None
    import importlib

    module = importlib.import_module(f".{modname}", __name__)
    value = getattr(module, name)
    globals()[name] = value
    return value


def __dir__():
    return sorted(set(globals()) | set(_EXPORTS))
