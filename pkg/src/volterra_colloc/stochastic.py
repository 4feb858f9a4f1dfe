"""Discrete stochastic arithmetic in the CESTAC style.

A :class:`StochasticScalar` carries ``p`` samples of the same computation.
After every elementary operation each sample is randomly rounded to one of
its representable neighbours, so the spread of the samples tracks the
accumulated rounding error.  The number of common significant digits (NCSD)
of the mean follows from Student's t statistic.

Two working precisions are supported: ``"double"`` (53-bit mantissa) and
``"single"`` (24-bit mantissa, emulated by rounding float64 results).

Random rounding differs slightly between them.  In double precision the
exact result is not available, so the working-precision result is moved by
one ulp with probability 1/2 in a random direction.  In single precision the
float64 intermediate serves as the exact result: exactly representable
values are kept, the others go to the lower or upper float32 neighbour with
probability 1/2 each.
"""
import math
import struct
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import stats

from .errors import ParameterError, UnreliableDivisionError

PRECISIONS = {"double": 53, "single": 24}

DEFAULT_SAMPLES = 3
DEFAULT_DELTA = 0.05

_F32 = struct.Struct("<f")
_U32 = struct.Struct("<I")
_F32_MAX = 3.4028234663852886e38


def _to_single(x):
    """Round a float to the nearest float32 value (returned as a Python float)."""
    if x != x or x in (math.inf, -math.inf):
        return x
    try:
        return _F32.unpack(_F32.pack(x))[0]
    except OverflowError:
        return math.copysign(math.inf, x)


def _next_single(y, up):
    # y must be float32-representable and finite
    if y == 0.0:
        tiny = 1.401298464324817e-45
        return tiny if up else -tiny
    bits = _U32.unpack(_F32.pack(y))[0]
    bits += 1 if (y > 0) == up else -1
    return _F32.unpack(_U32.pack(bits))[0]


def _perturb(x, perturb, up, precision):
    """Core rounding step shared by :func:`random_round` and the samplers."""
    if precision == "double":
        if not perturb or x == 0.0 or not math.isfinite(x):
            return x
        return math.nextafter(x, math.inf if up else -math.inf)
    y = _to_single(x)
    if not perturb or y == x or not math.isfinite(y) or abs(y) == _F32_MAX:
        return y
    if y < x:
        return _next_single(y, True) if up else y
    return y if up else _next_single(y, False)


def random_round(exact_result, rng, precision="double", probability=0.5):
    """Randomly round one freshly computed value.

    ``rng`` is a :class:`numpy.random.Generator`.  With ``probability=0`` the
    call is the identity in double precision and round-to-nearest in single.
    """
    if precision not in PRECISIONS:
        raise ParameterError(f"unknown precision {precision!r}")
    if precision == "double":
        perturb = rng.random() < probability
        up = rng.random() < 0.5
    else:
        perturb = probability > 0.0
        up = rng.random() < 0.5
    return _perturb(float(exact_result), perturb, up, precision)


class RoundingContext:
    """Random-rounding state shared by the scalars of one computation.

    Each context owns a private counter-based (Philox) stream so independent
    runs can proceed concurrently without sharing state.
    """

    _CHUNK = 1 << 14

    def __init__(self, seed=0, p=DEFAULT_SAMPLES, precision="double",
                 perturb=True):
        if p < 2:
            raise ParameterError("stochastic arithmetic needs p >= 2 samples")
        if precision not in PRECISIONS:
            raise ParameterError(f"unknown precision {precision!r}")
        self.seed = seed
        self.p = p
        self.precision = precision
        self.perturb = perturb
        self._rng = np.random.Generator(np.random.Philox(seed))
        self._bits = []

    def _draw(self):
        if not self._bits:
            self._bits = self._rng.integers(0, 4, size=self._CHUNK).tolist()
        return self._bits.pop()

    def round(self, x):
        if not self.perturb:
            return x if self.precision == "double" else _to_single(x)
        b = self._draw()
        if self.precision == "double":
            return _perturb(x, b & 1, b & 2, "double")
        return _perturb(x, True, b & 1, "single")

    def constant(self, value):
        """Working-precision representation of a constant (no perturbation)."""
        value = float(value)
        return value if self.precision == "double" else _to_single(value)

    def exact(self, value):
        """Lift a real constant to a scalar whose samples all agree."""
        if isinstance(value, StochasticScalar):
            return value
        c = self.constant(value)
        return StochasticScalar((c,) * self.p, self)

    def __call__(self, value):
        return self.exact(value)

    def from_samples(self, samples):
        samples = tuple(float(s) for s in samples)
        if len(samples) != self.p:
            raise ParameterError(f"expected {self.p} samples, got {len(samples)}")
        return StochasticScalar(samples, self)

    @property
    def unit_roundoff(self):
        return 2.0 ** -PRECISIONS[self.precision]


def _samples_of(other, ctx):
    if isinstance(other, StochasticScalar):
        if len(other.samples) != ctx.p:
            raise ParameterError("operands carry different sample counts")
        return other.samples
    return (ctx.constant(other),) * ctx.p


class StochasticScalar:
    """``p`` samples of one quantity computed under random rounding."""

    __slots__ = ("samples", "ctx")

    def __init__(self, samples, ctx):
        self.samples = samples
        self.ctx = ctx

    @property
    def p(self):
        return len(self.samples)

    @property
    def mean(self):
        return math.fsum(self.samples) / len(self.samples)

    @property
    def sigma(self):
        m = self.mean
        return math.sqrt(math.fsum((s - m) ** 2 for s in self.samples)
                         / (len(self.samples) - 1))

    def __float__(self):
        return self.mean

    def __repr__(self):
        rep = ncsd_estimate(self)
        if rep.informatical_zero:
            return "@.0"
        return f"StochasticScalar({self.mean!r}, ncsd={rep.value:.2f})"

    # arithmetic

    def __add__(self, other):
        rnd = self.ctx.round
        o = _samples_of(other, self.ctx)
        return StochasticScalar(
            tuple(rnd(a + b) for a, b in zip(self.samples, o)), self.ctx)

    __radd__ = __add__

    def __sub__(self, other):
        rnd = self.ctx.round
        o = _samples_of(other, self.ctx)
        return StochasticScalar(
            tuple(rnd(a - b) for a, b in zip(self.samples, o)), self.ctx)

    def __rsub__(self, other):
        rnd = self.ctx.round
        o = _samples_of(other, self.ctx)
        return StochasticScalar(
            tuple(rnd(b - a) for a, b in zip(self.samples, o)), self.ctx)

    def __mul__(self, other):
        rnd = self.ctx.round
        o = _samples_of(other, self.ctx)
        return StochasticScalar(
            tuple(rnd(a * b) for a, b in zip(self.samples, o)), self.ctx)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, StochasticScalar) and is_informatical_zero(other):
            raise UnreliableDivisionError(
                "division by an informatical zero (@.0)")
        rnd = self.ctx.round
        o = _samples_of(other, self.ctx)
        return StochasticScalar(
            tuple(rnd(a / b) for a, b in zip(self.samples, o)), self.ctx)

    def __rtruediv__(self, other):
        if is_informatical_zero(self):
            raise UnreliableDivisionError(
                "division by an informatical zero (@.0)")
        rnd = self.ctx.round
        o = _samples_of(other, self.ctx)
        return StochasticScalar(
            tuple(rnd(b / a) for a, b in zip(self.samples, o)), self.ctx)

    def __pow__(self, n):
        if isinstance(n, int) or (isinstance(n, float) and n.is_integer()
                                  and abs(n) <= 64):
            n = int(n)
            if n == 0:
                return self.ctx.exact(1.0)
            result = self
            for _ in range(abs(n) - 1):
                result = result * self
            return result if n > 0 else 1.0 / result
        return (self.log() * n).exp()

    def __neg__(self):
        return StochasticScalar(tuple(-a for a in self.samples), self.ctx)

    def __pos__(self):
        return self

    def __abs__(self):
        return StochasticScalar(tuple(abs(a) for a in self.samples), self.ctx)

    # comparisons act on the mean

    def __lt__(self, other):
        return self.mean < float(other)

    def __le__(self, other):
        return self.mean <= float(other)

    def __gt__(self, other):
        return self.mean > float(other)

    def __ge__(self, other):
        return self.mean >= float(other)

    # elementary functions, each followed by random rounding

    def _unary(self, fn):
        rnd = self.ctx.round
        return StochasticScalar(tuple(rnd(fn(a)) for a in self.samples),
                                self.ctx)

    def exp(self):
        return self._unary(math.exp)

    def log(self):
        return self._unary(math.log)

    def sqrt(self):
        return self._unary(math.sqrt)

    def sin(self):
        return self._unary(math.sin)

    def cos(self):
        return self._unary(math.cos)


def sa_add(a, b):
    return a + b


def sa_sub(a, b):
    return a - b


def sa_mul(a, b):
    return a * b


def sa_div(a, b):
    return a / b


@lru_cache(maxsize=None)
def student_t_quantile(delta, dof):
    """Two-sided Student-t value for confidence ``1 - delta``."""
    return float(stats.t.ppf(1.0 - delta / 2.0, dof))


@dataclass(frozen=True)
class NcsdReport:
    value: float
    informatical_zero: bool


def ncsd_pair(l1, l2):
    """Common significant digits of two reals.

    Equal arguments give ``inf``; ``l1 == -l2`` gives 0 rather than ``-inf``.
    """
    l1, l2 = float(l1), float(l2)
    if l1 == l2:
        return math.inf
    if l1 == -l2:
        return 0.0
    return math.log10(abs((l1 + l2) / (2.0 * (l1 - l2))))


def ncsd_estimate(x, delta=DEFAULT_DELTA):
    samples = x.samples
    p = len(samples)
    if p < 2:
        raise ParameterError("NCSD estimation needs p >= 2 samples")
    mean = math.fsum(samples) / p
    if mean == 0.0:
        return NcsdReport(0.0, True)
    sigma = x.sigma
    if sigma == 0.0:
        return NcsdReport(math.inf, False)
    if not math.isfinite(mean) or not math.isfinite(sigma):
        return NcsdReport(0.0, True)
    value = math.log10(math.sqrt(p) * abs(mean)
                       / (student_t_quantile(delta, p - 1) * sigma))
    return NcsdReport(value, value <= 0.0)


def is_informatical_zero(x, delta=DEFAULT_DELTA):
    return ncsd_estimate(x, delta).informatical_zero


def sa_difference_zero(a, b, delta=DEFAULT_DELTA):
    """True when ``a - b`` is indistinguishable from rounding noise (@.0)."""
    return ncsd_estimate(sa_sub(a, b), delta).informatical_zero
