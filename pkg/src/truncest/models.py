"""Parametric distribution families.

Five families are supported: binomial, Poisson, normal, gamma and Weibull.
A model is an immutable (family, parameters) pair; densities are evaluated
in log space so that ratios of very small densities stay usable, and
sampling is routed through ``numpy.random.default_rng`` (PCG64) with an
explicit seed, never global state.

Parameterization notes: the gamma family uses a shape ``a`` and a *scale*
``b`` (density proportional to ``x**(a-1) * exp(-x/b)``); the Weibull family
uses shape and scale.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

import numpy as np
from scipy.special import gammaln

from .errors import ModelParseError, UnsupportedFormError

__all__ = [
    "Family",
    "DistributionModel",
    "ModelTemplate",
    "ExpFamilyForm",
    "Support",
    "density",
    "log_density",
    "sample",
    "substream",
    "exp_family_form",
    "parse_model",
    "parse_model_template",
    "format_model",
]


class Family(str, Enum):
    BINOMIAL = "binomial"
    POISSON = "poisson"
    NORMAL = "normal"
    GAMMA = "gamma"
    WEIBULL = "weibull"


#: parameter names, in order, per family
PARAM_NAMES = {
    Family.BINOMIAL: ("n", "p"),
    Family.POISSON: ("lambda",),
    Family.NORMAL: ("m", "sigma"),
    Family.GAMMA: ("a", "b"),
    Family.WEIBULL: ("shape", "scale"),
}


@dataclass(frozen=True)
class Support:
    """Support descriptor: ``kind`` is one of ``integer_range``,
    ``nonnegative_integers``, ``real_line``, ``nonnegative_reals``."""

    kind: str
    low: Optional[float] = None
    high: Optional[float] = None


@dataclass(frozen=True)
class DistributionModel:
    """A fully specified member of one of the five families.

    Parameters are validated on construction: scale/rate/deviation
    parameters must be strictly positive, a binomial needs ``n >= 1``
    integer and ``0 < p < 1``.
    """

    family: Family
    params: tuple

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        params = tuple(float(v) for v in self.params)
        object.__setattr__(self, "params", params)
        names = PARAM_NAMES[self.family]
        if len(params) != len(names):
            raise ValueError(
                f"{self.family.value} expects {len(names)} parameters "
                f"{names}, got {len(params)}"
            )
        if self.family is Family.BINOMIAL:
            n, p = params
            if n < 1 or n != round(n):
                raise ValueError("binomial trials n must be a positive integer")
            if not 0.0 < p < 1.0:
                raise ValueError("binomial p must lie strictly in (0, 1)")
        elif self.family is Family.POISSON:
            if params[0] <= 0.0:
                raise ValueError("poisson rate must be strictly positive")
        elif self.family is Family.NORMAL:
            if params[1] <= 0.0:
                raise ValueError("normal sigma must be strictly positive")
        else:  # gamma / weibull: two strictly positive parameters
            if params[0] <= 0.0 or params[1] <= 0.0:
                raise ValueError(f"{self.family.value} parameters must be strictly positive")

    @property
    def support(self) -> Support:
        if self.family is Family.BINOMIAL:
            return Support("integer_range", 0.0, self.params[0])
        if self.family is Family.POISSON:
            return Support("nonnegative_integers", 0.0, None)
        if self.family is Family.NORMAL:
            return Support("real_line")
        return Support("nonnegative_reals", 0.0, None)

    @property
    def is_discrete(self) -> bool:
        return self.family in (Family.BINOMIAL, Family.POISSON)

    def __str__(self):
        return format_model(self)


# off-support log density marker; density() maps it to exactly 0
_NEG_INF = -np.inf
# tolerance for treating a float as an integer lattice point
_INT_TOL = 1e-9


def log_density(model: DistributionModel, x) -> np.ndarray:
    """Log pmf/pdf at ``x`` (scalar or array); ``-inf`` off support."""
    x = np.asarray(x, dtype=float)
    fam = model.family
    with np.errstate(divide="ignore", invalid="ignore"):
        if fam is Family.BINOMIAL:
            n, p = model.params
            k = np.round(x)
            ok = (np.abs(x - k) <= _INT_TOL) & (k >= 0) & (k <= n)
            k = np.where(ok, k, 0.0)
            lf = (
                gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)
                + k * math.log(p) + (n - k) * math.log1p(-p)
            )
        elif fam is Family.POISSON:
            (lam,) = model.params
            k = np.round(x)
            ok = (np.abs(x - k) <= _INT_TOL) & (k >= 0)
            k = np.where(ok, k, 0.0)
            lf = k * math.log(lam) - lam - gammaln(k + 1)
        elif fam is Family.NORMAL:
            m, s = model.params
            ok = np.isfinite(x)
            z = (x - m) / s
            lf = -0.5 * z * z - math.log(s) - 0.5 * math.log(2.0 * math.pi)
        elif fam is Family.GAMMA:
            a, b = model.params
            ok = x > 0.0
            xs = np.where(ok, x, 1.0)
            lf = -a * math.log(b) - gammaln(a) + (a - 1.0) * np.log(xs) - xs / b
        else:  # WEIBULL
            k_, lam = model.params
            ok = x > 0.0
            xs = np.where(ok, x, 1.0)
            lf = (
                math.log(k_ / lam) + (k_ - 1.0) * np.log(xs / lam)
                - (xs / lam) ** k_
            )
    out = np.where(ok, lf, _NEG_INF)
    return out if out.ndim else float(out)


def density(model: DistributionModel, x):
    """pmf (discrete) or pdf (continuous) at ``x``; exactly 0 off support."""
    lf = log_density(model, x)
    with np.errstate(over="ignore"):
        out = np.exp(lf)
    return out


def sample(model: DistributionModel, count: int, seed) -> np.ndarray:
    """Draw ``count`` iid values, deterministically for a given seed.

    The generator is numpy's PCG64 (``default_rng``); ``seed`` may be an
    int or a sequence (used to derive independent replication streams).
    Family draws use the generator's native methods: binomial/poisson
    (exact discrete samplers), normal (ziggurat), gamma (Marsaglia-Tsang
    via ``standard_gamma``), weibull (inverse cdf).
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(seed)
    fam = model.family
    if fam is Family.BINOMIAL:
        n, p = model.params
        return rng.binomial(int(n), p, count).astype(float)
    if fam is Family.POISSON:
        return rng.poisson(model.params[0], count).astype(float)
    if fam is Family.NORMAL:
        m, s = model.params
        return rng.normal(m, s, count)
    if fam is Family.GAMMA:
        a, b = model.params
        return b * rng.standard_gamma(a, count)
    k_, lam = model.params
    return lam * rng.weibull(k_, count)


def substream(seed, index: int):
    """Seed material for replication ``index`` of a seeded experiment.

    Serial and parallel execution agree because each replication draws
    from its own ``default_rng([seed, index])`` stream.
    """
    return [int(seed), int(index)]


@dataclass(frozen=True)
class ExpFamilyForm:
    """One-parameter exponential representation f(x) = K(x) exp(theta*T(x) - A(theta)).

    ``natural_param`` is theta evaluated at the owning model's parameters;
    ``to_natural``/``from_natural`` map the free user parameter to and from
    theta. ``base_label``/``statistic_label`` are closed-form descriptions.
    """

    log_base: Callable  # log K(x)
    statistic: Callable  # T(x)
    natural_param: float
    log_normalizer: Callable  # A(theta)
    free_param_index: int
    to_natural: Callable
    from_natural: Callable
    base_label: str
    statistic_label: str

    def log_density(self, x):
        x = np.asarray(x, dtype=float)
        th = self.natural_param
        return self.log_base(x) + th * self.statistic(x) - self.log_normalizer(th)


def exp_family_form(model: DistributionModel, free_param_index: int) -> ExpFamilyForm:
    """Exponential-family components with one free parameter.

    Supported combinations: binomial ``p`` (n known), poisson rate, normal
    mean (sigma known) and gamma ``1/b`` (a known). Anything else raises
    :class:`UnsupportedFormError`.
    """
    fam = model.family
    if fam is Family.BINOMIAL and free_param_index == 1:
        n, p = model.params
        return ExpFamilyForm(
            log_base=lambda x: gammaln(n + 1) - gammaln(x + 1) - gammaln(n - x + 1),
            statistic=lambda x: np.asarray(x, dtype=float),
            natural_param=math.log(p / (1.0 - p)),
            log_normalizer=lambda th: n * np.log1p(np.exp(th)),
            free_param_index=1,
            to_natural=lambda q: math.log(q / (1.0 - q)),
            from_natural=lambda th: 1.0 / (1.0 + math.exp(-th)),
            base_label="C(n, x)",
            statistic_label="x",
        )
    if fam is Family.POISSON and free_param_index == 0:
        (lam,) = model.params
        return ExpFamilyForm(
            log_base=lambda x: -gammaln(np.asarray(x, dtype=float) + 1),
            statistic=lambda x: np.asarray(x, dtype=float),
            natural_param=math.log(lam),
            log_normalizer=lambda th: np.exp(th),
            free_param_index=0,
            to_natural=math.log,
            from_natural=math.exp,
            base_label="1/x!",
            statistic_label="x",
        )
    if fam is Family.NORMAL and free_param_index == 0:
        m, s = model.params
        s2 = s * s
        return ExpFamilyForm(
            log_base=lambda x: -np.asarray(x, dtype=float) ** 2 / (2 * s2)
            - math.log(s) - 0.5 * math.log(2 * math.pi),
            statistic=lambda x: np.asarray(x, dtype=float) / s2,
            natural_param=m,
            log_normalizer=lambda th: th * th / (2 * s2),
            free_param_index=0,
            to_natural=lambda v: v,
            from_natural=lambda th: th,
            base_label="exp(-x^2/(2 sigma^2)) / (sigma sqrt(2 pi))",
            statistic_label="x / sigma^2",
        )
    if fam is Family.GAMMA and free_param_index == 1:
        a, b = model.params
        return ExpFamilyForm(
            log_base=lambda x: (a - 1.0) * np.log(np.asarray(x, dtype=float)) - gammaln(a),
            statistic=lambda x: -np.asarray(x, dtype=float),
            natural_param=1.0 / b,
            log_normalizer=lambda th: -a * np.log(th),
            free_param_index=1,
            to_natural=lambda bb: 1.0 / bb,
            from_natural=lambda th: 1.0 / th,
            base_label="x^(a-1) / Gamma(a)",
            statistic_label="-x",
        )
    raise UnsupportedFormError(
        f"no one-parameter exponential form for {fam.value} with free "
        f"parameter index {free_param_index}"
    )


@dataclass(frozen=True)
class ModelTemplate:
    """A family with some parameters fixed and the rest left free.

    ``params`` holds a float for each fixed parameter and ``None`` for each
    free one, in the family's natural order.
    """

    family: Family
    params: tuple

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        names = PARAM_NAMES[self.family]
        params = tuple(None if v is None else float(v) for v in self.params)
        if len(params) != len(names):
            raise ValueError(f"{self.family.value} expects {len(names)} parameters")
        object.__setattr__(self, "params", params)

    @property
    def free_indices(self) -> tuple:
        return tuple(i for i, v in enumerate(self.params) if v is None)

    @property
    def free_names(self) -> tuple:
        names = PARAM_NAMES[self.family]
        return tuple(names[i] for i in self.free_indices)

    def bind(self, values) -> DistributionModel:
        """Fill the free slots, in order, with ``values``."""
        values = list(np.atleast_1d(values))
        if len(values) != len(self.free_indices):
            raise ValueError(
                f"expected {len(self.free_indices)} free values, got {len(values)}"
            )
        filled = list(self.params)
        for i, v in zip(self.free_indices, values):
            filled[i] = float(v)
        return DistributionModel(self.family, tuple(filled))


_LITERAL_RE = re.compile(r"^\s*([a-zA-Z]+)\s*\(\s*(.*?)\s*\)\s*$", re.S)

# accepted aliases for parameter names in literals
_ALIASES = {
    Family.POISSON: {"lam": "lambda", "rate": "lambda"},
    Family.NORMAL: {"mean": "m", "mu": "m", "sd": "sigma", "std": "sigma"},
    Family.WEIBULL: {"k": "shape", "lambda": "scale"},
}


def _parse_literal(text: str):
    m = _LITERAL_RE.match(text)
    if not m:
        raise ModelParseError(f"cannot parse model literal: {text!r}")
    fam_name = m.group(1).lower()
    try:
        fam = Family(fam_name)
    except ValueError:
        raise ModelParseError(f"unknown family {fam_name!r} in {text!r}") from None
    given = {}
    body = m.group(2).strip()
    if body:
        for part in body.split(","):
            if "=" not in part:
                raise ModelParseError(f"expected name=value in {part!r} of {text!r}")
            key, val = part.split("=", 1)
            key = key.strip().lower()
            key = _ALIASES.get(fam, {}).get(key, key)
            if key not in PARAM_NAMES[fam]:
                raise ModelParseError(
                    f"unknown parameter {key!r} for {fam.value} in {text!r}"
                )
            if key in given:
                raise ModelParseError(f"parameter {key!r} given twice in {text!r}")
            try:
                given[key] = float(val)
            except ValueError:
                raise ModelParseError(f"bad numeric value {val.strip()!r} in {text!r}") from None
    return fam, given


def parse_model_template(text: str) -> ModelTemplate:
    """Parse a model literal, leaving omitted parameters free.

    ``binomial(n=10)`` fixes the trial count and leaves ``p`` free;
    ``normal()`` leaves both mean and sigma free. Case-insensitive and
    whitespace-tolerant.
    """
    fam, given = _parse_literal(text)
    params = tuple(given.get(name) for name in PARAM_NAMES[fam])
    try:
        return ModelTemplate(fam, params)
    except ValueError as exc:
        raise ModelParseError(str(exc)) from None


def parse_model(text: str) -> DistributionModel:
    """Parse a fully specified model literal such as ``poisson(lambda=3)``."""
    tpl = parse_model_template(text)
    if tpl.free_indices:
        missing = ", ".join(tpl.free_names)
        raise ModelParseError(f"model literal {text!r} is missing parameters: {missing}")
    try:
        return tpl.bind([])
    except ValueError as exc:
        raise ModelParseError(str(exc)) from None


def format_model(model: DistributionModel) -> str:
    names = PARAM_NAMES[model.family]
    vals = []
    for name, v in zip(names, model.params):
        if name == "n":
            vals.append(f"{name}={int(v)}")
        else:
            vals.append(f"{name}={v:g}")
    return f"{model.family.value}({','.join(vals)})"
