"""Problem files and the end-to-end solve.

A problem bundles the operator, the solver settings and the requested
outputs. ``solve`` runs: validation, beta table, kernel basis on 0..p0,
recursion to N, integerization, quasi-orthogonal selection.
"""

import json
from dataclasses import dataclass, field, replace

import jsonschema

from .errors import SchemaError
from .evaluate import EvaluatedSolution
from .forms import WeightSpec
from .kernel import extend_recursion, initial_basis
from .operator import ODEOperator, compute_beta, validate_operator
from .qortho import OrthoParams, run_pipeline, suggest_dimension

__all__ = ["PROBLEM_SCHEMA", "Problem", "Result", "load_problem", "parse_problem", "solve"]

_RATIONAL = {"type": "string", "pattern": r"^\s*-?\d+(\s*/\s*\d+)?\s*$"}
_SCALAR = {
    "oneOf": [
        {"type": "integer"},
        _RATIONAL,
        {
            "type": "object",
            "properties": {"re": {"oneOf": [_RATIONAL, {"type": "integer"}]},
                           "im": {"oneOf": [_RATIONAL, {"type": "integer"}]}},
            "additionalProperties": False,
        },
    ]
}
_INDEX_PAIRS = {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0},
                                           "minItems": 2, "maxItems": 2}}
_POINT_PAIRS = {"type": "array", "items": {"type": "array", "items": {"oneOf": [_RATIONAL, {"type": "integer"}]},
                                           "minItems": 2, "maxItems": 2}}

PROBLEM_SCHEMA = {
    "type": "object",
    "required": ["operator", "solver"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "operator": {
            "type": "object",
            "required": ["M", "k0", "k0d", "q"],
            "additionalProperties": False,
            "properties": {
                "M": {"type": "integer", "minimum": 0},
                "k0": {"type": "integer"},
                "k0d": {"type": "integer"},
                "q": {"type": "array", "items": {"type": "array", "items": _SCALAR}},
            },
        },
        "solver": {
            "type": "object",
            "required": ["N"],
            "additionalProperties": False,
            "properties": {
                "N": {"type": "integer", "minimum": 0},
                "K": {"type": ["integer", "null"]},
                "J": {"type": ["integer", "null"]},
                "weight_base": {"oneOf": [{"type": "integer", "minimum": 2}, _RATIONAL]},
                "h": {"type": "integer", "minimum": 2},
                "g": {"type": "integer", "minimum": 2},
                "target_dim": {"type": "integer", "minimum": 1},
                "compute_bound_data": {"type": "boolean"},
                "max_iterations": {"type": "integer", "minimum": 1},
                "flags": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {
                        "p0_rule": {"enum": ["definition", "max"]},
                        "mu_sign": {"enum": ["symmetric", "printed"]},
                        "strict_table_test": {"type": "integer", "minimum": 0},
                        "interleave_reduce_every": {"type": "integer", "minimum": 0},
                        "bound_form": {"enum": ["squared", "verbatim"]},
                        "dimension_jump_factor": {"type": "integer", "minimum": 2},
                        "diagnose_dimension": {"type": "boolean"},
                    },
                },
            },
        },
        "outputs": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "coeffs": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {
                        "normalization": {"enum": ["raw", "standard"]},
                        "convention": {"enum": ["psi", "conjugate"]},
                    },
                },
                "ratios": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {
                        "coeffs": _INDEX_PAIRS,
                        "points": _POINT_PAIRS,
                        "convention": {"enum": ["psi", "conjugate"]},
                        "digits": {"type": "integer", "minimum": 1},
                    },
                },
                "points": {
                    "type": "object",
                    "required": ["x"],
                    "additionalProperties": False,
                    "properties": {
                        "x": {"type": "array", "items": {"oneOf": [_RATIONAL, {"type": "integer"}]}},
                        "digits": {"type": "integer", "minimum": 1},
                        "normalization": {"enum": ["raw", "standard"]},
                    },
                },
                "bound": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {
                        "delta_K": {"oneOf": [_RATIONAL, {"type": "integer"}, {"const": "oracle"}]},
                        "N_ref": {"type": "integer", "minimum": 1},
                        "digits": {"type": "integer", "minimum": 1},
                    },
                },
                "plot": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {
                        "grid": {"type": "string"},
                        "digits": {"type": "integer", "minimum": 1},
                        "normalization": {"enum": ["raw", "standard"]},
                    },
                },
            },
        },
    },
}

SOLVER_DEFAULTS = {
    "K": None,
    "J": None,
    "weight_base": 10 ** 8,
    "h": 64,
    "g": 64,
    "target_dim": 1,
    "compute_bound_data": False,
    "max_iterations": 10 ** 6,
}

FLAG_DEFAULTS = {
    "p0_rule": "definition",
    "mu_sign": "symmetric",
    "strict_table_test": 0,
    "interleave_reduce_every": 0,
    "bound_form": "squared",
    "dimension_jump_factor": 10 ** 6,
    "diagnose_dimension": False,
}


@dataclass(frozen=True)
class Problem:
    operator: ODEOperator
    solver: dict
    outputs: dict = field(default_factory=dict)
    name: str = "problem"

    def with_solver(self, **changes):
        s = dict(self.solver)
        s.update(changes)
        return replace(self, solver=s)

    @property
    def flags(self):
        f = dict(FLAG_DEFAULTS)
        f.update(self.solver.get("flags") or {})
        return f

    def setting(self, key):
        v = self.solver.get(key)
        return SOLVER_DEFAULTS.get(key) if v is None else v

    def to_json(self):
        out = {"name": self.name, "operator": self.operator.to_json(), "solver": dict(self.solver)}
        if self.outputs:
            out["outputs"] = self.outputs
        return out


def parse_problem(obj, name="problem"):
    try:
        jsonschema.validate(obj, PROBLEM_SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path)
        raise SchemaError("%s: %s" % (path or "<root>", exc.message)) from None
    op_obj = obj["operator"]
    if len(op_obj["q"]) != op_obj["M"] + 1:
        raise SchemaError("operator/q: need M+1 = %d polynomials" % (op_obj["M"] + 1))
    try:
        op = ODEOperator.from_json(op_obj)
        solver = dict(obj["solver"])
        if isinstance(solver.get("weight_base"), str):
            from .arith import parse_rational

            b = parse_rational(solver["weight_base"])
            if b.denominator != 1 or b < 2:
                raise ValueError("weight_base must be an integer >= 2")
            solver["weight_base"] = int(b)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(str(exc)) from None
    return Problem(op, solver, obj.get("outputs") or {}, obj.get("name", name))


def load_problem(path):
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError("malformed JSON: %s" % exc) from None
    stem = str(path).rsplit("/", 1)[-1].rsplit(".", 1)[0]
    return parse_problem(obj, obj.get("name", stem) if isinstance(obj, dict) else stem)


@dataclass
class Result:
    problem: Problem
    beta: object
    basis: object
    spec: WeightSpec
    params: OrthoParams
    solution: object
    diagnostics: dict

    def evaluated(self, index=0, normalization="raw"):
        from .arith import GaussianRational
        from .evaluate import normalize_standard

        coeffs = [GaussianRational(x, y) for x, y in self.solution.G_trunc[index]]
        sol = EvaluatedSolution.make(coeffs, self.problem.operator.k0)
        return normalize_standard(sol) if normalization == "standard" else sol


def solve(problem):
    op = problem.operator
    validate_operator(op)
    beta = compute_beta(op)
    flags = problem.flags
    N = problem.solver["N"]
    p0 = beta.p0
    if flags["p0_rule"] == "max":
        p0 = max(2 * op.M + op.k0, 2 * op.M + op.k0 - op.k0d)
    spec = WeightSpec.make(N, op.k0, problem.setting("K"), problem.setting("J"),
                           problem.setting("weight_base"), flags["mu_sign"])
    spec.check(p0)
    basis = initial_basis(beta, p0)
    basis = extend_recursion(basis, beta, N, flags["interleave_reduce_every"])
    params = OrthoParams(
        h=problem.setting("h"),
        g=problem.setting("g"),
        max_iterations=problem.setting("max_iterations"),
        target_dim=problem.setting("target_dim"),
        compute_bound_data=problem.setting("compute_bound_data"),
        strict_table_test=flags["strict_table_test"],
    )
    sol = run_pipeline(basis, spec, params)
    diagnostics = {"D": basis.D, "ell0": beta.ell0, "j0": beta.j0, "p0": p0,
                   "K": spec.K, "J": spec.J, "N": N}
    if flags["diagnose_dimension"] and basis.D > 0:
        full = run_pipeline(basis, spec, replace(params, target_dim=basis.D, compute_bound_data=False))
        diagnostics["sigma_all"] = full.sigma
        diagnostics["suggested_dim"] = suggest_dimension(full.sigma, flags["dimension_jump_factor"])
    return Result(problem, beta, basis, spec, params, sol, diagnostics)
