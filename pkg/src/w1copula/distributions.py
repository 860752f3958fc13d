"""Univariate distributions exposing cdf, generalized inverse, support and mean.

All families are immutable. ``cdf``, ``quantile`` and ``isf`` accept scalars or
numpy arrays and return the same shape (a Python float for scalar input).
"""
from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import ndtr, ndtri

from .errors import DomainError, NonFiniteValueError, SpecError

__all__ = [
    "Distribution",
    "SupportBounds",
    "Normal",
    "Uniform",
    "Exponential",
    "Empirical",
    "parse_distribution",
]


@dataclass(frozen=True)
class SupportBounds:
    lower: float
    upper: float

    @property
    def finite(self) -> bool:
        return math.isfinite(self.lower) and math.isfinite(self.upper)

    def __iter__(self):
        yield self.lower
        yield self.upper
        yield self.finite


def _wrap(x, out):
    if np.ndim(x) == 0:
        return float(out)
    return out


class Distribution(ABC):
    """Base class. Subclasses implement the vectorized ``_cdf``/``_quantile``/``_isf``."""

    @abstractmethod
    def _cdf(self, x: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def _quantile(self, u: np.ndarray) -> np.ndarray:
        """Generalized inverse on the open interval (0, 1)."""

    def _isf(self, p: np.ndarray) -> np.ndarray:
        return self._quantile(1.0 - p)

    @abstractmethod
    def support(self) -> SupportBounds: ...

    @abstractmethod
    def mean(self) -> float: ...

    def cdf(self, x):
        """P(X <= x). Raises DomainError for non-finite ``x``."""
        arr = np.asarray(x, dtype=float)
        if not np.all(np.isfinite(arr)):
            raise DomainError(f"cdf argument must be finite, got {x!r}")
        return _wrap(x, self._cdf(arr))

    def quantile(self, u):
        """inf{x : cdf(x) >= u}.

        At u = 0 or u = 1 the support bound is returned; if that bound is
        infinite a NonFiniteValueError is raised instead of a number.
        """
        arr = np.asarray(u, dtype=float)
        if np.any(np.isnan(arr)) or np.any((arr < 0.0) | (arr > 1.0)):
            raise DomainError(f"quantile level must lie in [0, 1], got {u!r}")
        out = self._quantile(np.clip(arr, 1e-300, 1.0 - 1e-16))
        if np.any(arr == 0.0) or np.any(arr == 1.0):
            lo, hi, _ = self.support()
            if (np.any(arr == 0.0) and not math.isfinite(lo)) or (
                np.any(arr == 1.0) and not math.isfinite(hi)
            ):
                raise NonFiniteValueError(
                    f"quantile at {u!r} is unbounded for {self}",
                    value=lo if np.any(arr == 0.0) else hi,
                )
            out = np.where(arr == 0.0, lo, np.where(arr == 1.0, hi, out))
        return _wrap(u, out)

    def isf(self, p):
        """Upper-tail quantile, ``quantile(1 - p)``, accurate for tiny ``p``."""
        arr = np.asarray(p, dtype=float)
        if np.any(np.isnan(arr)) or np.any((arr <= 0.0) | (arr >= 1.0)):
            raise DomainError(f"isf level must lie in (0, 1), got {p!r}")
        return _wrap(p, self._isf(arr))


@dataclass(frozen=True)
class Normal(Distribution):
    mu: float
    sigma: float

    def __post_init__(self):
        if not (math.isfinite(self.mu) and math.isfinite(self.sigma)):
            raise DomainError("normal parameters must be finite")
        if self.sigma <= 0:
            raise DomainError(f"sigma must be > 0, got {self.sigma}")

    def _cdf(self, x):
        return ndtr((x - self.mu) / self.sigma)

    def _quantile(self, u):
        return self.mu + self.sigma * ndtri(u)

    def _isf(self, p):
        return self.mu - self.sigma * ndtri(p)

    def support(self):
        return SupportBounds(-math.inf, math.inf)

    def mean(self):
        return float(self.mu)

    def __str__(self):
        return f"normal:{self.mu!r},{self.sigma!r}"


@dataclass(frozen=True)
class Uniform(Distribution):
    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise DomainError("uniform bounds must be finite")
        if self.a >= self.b:
            raise DomainError(f"uniform requires a < b, got a ≥ b ({self.a}, {self.b})")

    def _cdf(self, x):
        return np.clip((x - self.a) / (self.b - self.a), 0.0, 1.0)

    def _quantile(self, u):
        return self.a + u * (self.b - self.a)

    def _isf(self, p):
        return self.b - p * (self.b - self.a)

    def support(self):
        return SupportBounds(float(self.a), float(self.b))

    def mean(self):
        return 0.5 * (self.a + self.b)

    def __str__(self):
        return f"uniform:{self.a!r},{self.b!r}"


@dataclass(frozen=True)
class Exponential(Distribution):
    lam: float

    def __post_init__(self):
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise DomainError(f"rate must be finite and > 0, got {self.lam}")

    def _cdf(self, x):
        return np.where(x > 0, -np.expm1(-self.lam * np.maximum(x, 0.0)), 0.0)

    def _quantile(self, u):
        return -np.log1p(-u) / self.lam

    def _isf(self, p):
        return -np.log(p) / self.lam

    def support(self):
        return SupportBounds(0.0, math.inf)

    def mean(self):
        return 1.0 / self.lam

    def __str__(self):
        return f"exp:{self.lam!r}"


@dataclass(frozen=True, eq=False)
class Empirical(Distribution):
    """Equal-weight atoms at the given samples (ties allowed)."""

    samples: np.ndarray

    def __init__(self, samples):
        arr = np.sort(np.asarray(samples, dtype=float).ravel(), kind="stable")
        if arr.size == 0:
            raise DomainError("empirical distribution needs at least one sample")
        if not np.all(np.isfinite(arr)):
            raise DomainError("empirical samples must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    @classmethod
    def from_file(cls, path) -> "Empirical":
        """One real per line; blank lines and ``#`` comments are skipped."""
        values = []
        for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                values.append(float(line))
            except ValueError:
                raise DomainError(f"{path}:{lineno}: not a number: {line!r}") from None
        return cls(values)

    @property
    def n(self) -> int:
        return self.samples.size

    def _cdf(self, x):
        return np.searchsorted(self.samples, x, side="right") / self.n

    def _index(self, u):
        # smallest k in 1..n with k/n >= u, robust to rounding in u*n
        n = self.n
        k = np.ceil(u * n)
        k = np.where((k - 1) / n >= u, k - 1, k)
        k = np.where(k / n < u, k + 1, k)
        return np.clip(k, 1, n).astype(np.intp) - 1

    def _quantile(self, u):
        return self.samples[self._index(u)]

    def support(self):
        return SupportBounds(float(self.samples[0]), float(self.samples[-1]))

    def mean(self):
        return math.fsum(self.samples) / self.n

    def __eq__(self, other):
        return isinstance(other, Empirical) and np.array_equal(self.samples, other.samples)

    def __hash__(self):
        return hash(self.samples.tobytes())

    def __repr__(self):
        return f"Empirical(n={self.n}, samples={self.samples.tolist()!r})"

    def __str__(self):
        return "empirical:[" + ",".join(repr(float(s)) for s in self.samples) + "]"


_ARITY = {"normal": 2, "uniform": 2, "exp": 1}


def parse_distribution(text: str) -> Distribution:
    """Parse ``normal:MU,SIGMA``, ``uniform:A,B``, ``exp:LAMBDA`` or ``empirical:@path``."""
    family, sep, rest = text.partition(":")
    if not sep:
        raise SpecError("expected FAMILY:PARAMS", text, 0)
    offset = len(family) + 1
    if family == "empirical":
        if not rest.startswith("@") or len(rest) < 2:
            raise SpecError("empirical expects @path", rest, offset)
        try:
            return Empirical.from_file(rest[1:])
        except OSError as exc:
            raise SpecError(f"unreadable sample file: {exc.strerror}", rest[1:], offset + 1) from None
        except DomainError as exc:
            raise SpecError(str(exc), rest[1:], offset + 1) from None
    if family not in _ARITY:
        raise SpecError("unknown distribution family", family, 0)
    tokens = rest.split(",")
    if len(tokens) != _ARITY[family]:
        raise SpecError(
            f"{family} takes {_ARITY[family]} parameter(s), got {len(tokens)}", rest, offset
        )
    params = []
    pos = offset
    for tok in tokens:
        try:
            params.append(float(tok))
        except ValueError:
            raise SpecError("non-numeric parameter", tok, pos) from None
        pos += len(tok) + 1
    ctor = {"normal": Normal, "uniform": Uniform, "exp": Exponential}[family]
    try:
        return ctor(*params)
    except DomainError as exc:
        raise SpecError(str(exc), rest, offset) from None
