"""Geometric product measures on excursions.

``q`` and ``alpha`` are indexed from 1 in the formulas and from 0 in the
tuples here: ``q[k - 1]`` is ``q_k``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import BallConfig, Excursion, excursion_sequence
from .errors import (
    DegenerateParameterError,
    NotInAError,
    TruncationError,
    UnsupportedDensityError,
)
from .solitons import SlotDiagram, build_excursion, slot_diagram

RNG_ALGORITHM = "numpy.random.PCG64"
DEFAULT_TOL = 1e-15
MAX_K = 10_000


def map_A(q: Sequence, K: int | None = None) -> list:
    """``alpha_k = (1 - q_k) * prod_{j<k} q_j^(2(k-j))``.

    Works with floats or exact ``Fraction`` values.
    """
    q = list(q[:K] if K is not None else q)
    for v in q:
        if not 0 < v <= 1:
            raise NotInAError(f"q entries must lie in (0, 1], got {v}")
    alpha = []
    for k in range(1, len(q) + 1):
        p = 1
        for j in range(1, k):
            p *= q[j - 1] ** (2 * (k - j))
        alpha.append((1 - q[k - 1]) * p)
    return alpha


def map_Q(alpha: Sequence, K: int | None = None) -> list:
    """Inverse of :func:`map_A`, built one index at a time."""
    alpha = list(alpha[:K] if K is not None else alpha)
    q: list = []
    for k in range(1, len(alpha) + 1):
        p = 1
        for j in range(1, k):
            p *= q[j - 1] ** (2 * (k - j))
        if p == 0:
            raise DegenerateParameterError(f"product of earlier q vanishes at k={k}")
        qk = 1 - alpha[k - 1] / p
        if not 0 < qk <= 1:
            raise NotInAError(f"q_{k} = {qk} is outside (0, 1]; alpha is not in the admissible set")
        q.append(qk)
    return q


def _map_Q_fast(alpha: Sequence[float]) -> list[float]:
    # same recursion in log space, linear per step
    q: list[float] = []
    a = 0.0  # sum_{j<k} log q_j
    b = 0.0  # sum_{j<k} (k - j) log q_j, i.e. log of the root of the product
    for k in range(1, len(alpha) + 1):
        b += a  # advance from k - 1 to k
        p = math.exp(2 * b)
        if p == 0:
            raise DegenerateParameterError(f"product of earlier q underflows at k={k}")
        qk = 1 - alpha[k - 1] / p
        if not 0 < qk <= 1:
            raise NotInAError(f"q_{k} = {qk} is outside (0, 1]; alpha is not in the admissible set")
        q.append(qk)
        a += math.log(qk)
    return q


@dataclass(frozen=True)
class MeasureParams:
    """Matched ``q``/``alpha`` sequences truncated at ``K``.

    ``tail_bound`` bounds ``1 - prod_{l > K} q_l``, the mass ignored by the
    truncation.  ``lam`` is set for the random walk family.
    """

    q: tuple[float, ...]
    alpha: tuple[float, ...]
    tail_bound: float = 0.0
    lam: float | None = None

    @property
    def K(self) -> int:
        return len(self.q)

    @classmethod
    def from_q(cls, q: Sequence[float], tail_bound: float = 0.0) -> MeasureParams:
        """Finite ``q``; entries beyond the end are taken to be 1."""
        q = tuple(float(v) for v in q)
        return cls(q, tuple(map_A(q)), tail_bound)

    @classmethod
    def from_alpha(cls, alpha: Sequence[float], tail_bound: float = 0.0) -> MeasureParams:
        alpha = tuple(float(a) for a in alpha)
        return cls(tuple(_map_Q_fast(alpha)), alpha, tail_bound)

    def q_at(self, k: int) -> float:
        return self.q[k - 1] if k <= self.K else 1.0

    @property
    def partition_function(self) -> float:
        """``Z = 1 / prod q_k`` over the truncation."""
        return 1.0 / math.prod(self.q)

    def describe(self) -> dict:
        return {"K": self.K, "tail_bound": self.tail_bound, "lambda": self.lam}


def alpha_of_lambda(lam: float, K: int | None = None, tol: float = DEFAULT_TOL) -> MeasureParams:
    """Random walk excursion law: ``alpha_k = (lam (1 - lam))^k``.

    Without ``K`` the truncation grows until the neglected mass
    ``sum_{l > K} (1 - q_l)`` drops below ``tol``.
    """
    lam = float(lam)
    if not 0 <= lam < 0.5:
        raise UnsupportedDensityError(f"lambda must lie in [0, 1/2), got {lam}")
    if lam == 0:
        return MeasureParams((1.0,), (0.0,), 0.0, 0.0)
    base = lam * (1 - lam)
    alpha: list[float] = []
    defect: list[float] = []  # 1 - q_k, kept exact rather than rounded via q_k
    a = b = 0.0
    k = 0
    while True:
        k += 1
        b += a
        d = base ** k / math.exp(2 * b)
        if not 0 <= d < 1:
            raise NotInAError(f"q_{k} = {1 - d} is outside (0, 1]")
        alpha.append(base ** k)
        defect.append(d)
        a += math.log1p(-d)
        # run a little past the requested truncation to estimate its tail
        if k > 1 and k >= (K or 0) + 2 and d < tol * 1e-3:
            break
        if k > MAX_K:
            raise TruncationError(f"tail of q does not fall below {tol} within {MAX_K} terms")
    if K is None:
        K = len(defect)
        tail = 0.0
        while K > 1 and tail + defect[K - 1] < tol:
            tail += defect[K - 1]
            K -= 1
    tail = math.fsum(defect[K:])
    if defect[-2] > 0 and defect[-1] < defect[-2]:
        ratio = defect[-1] / defect[-2]
        tail += defect[-1] * ratio / (1 - ratio)
    q = [1 - d for d in defect]
    return MeasureParams(tuple(q[:K]), tuple(alpha[:K]), tail, lam)


def _diagram(obj: Excursion | SlotDiagram) -> SlotDiagram:
    return obj if isinstance(obj, SlotDiagram) else slot_diagram(obj, "HT")


def nu_weight(obj: Excursion | SlotDiagram, params: MeasureParams) -> float:
    """``prod_k (1 - q_k)^{n_k} q_k^{s_k}`` over ``k = 1 .. K``."""
    d = _diagram(obj)
    if d.m > params.K:
        raise TruncationError(f"diagram has solitons of size {d.m} beyond the truncation K={params.K}")
    w = 1.0
    for k in range(1, params.K + 1):
        qk = params.q[k - 1]
        nk = d.n(k)
        sk = d.expected_slots(k) if k < d.m else 1
        w *= (1 - qk) ** nk * qk ** sk
    return w


def nu_weight_alpha(obj: Excursion | SlotDiagram, params: MeasureParams) -> float:
    """``Z^{-1} prod_k alpha_k^{n_k}``."""
    d = _diagram(obj)
    if d.m > params.K:
        raise TruncationError(f"diagram has solitons of size {d.m} beyond the truncation K={params.K}")
    w = 1.0 / params.partition_function
    for k, nk in enumerate(d.counts, start=1):
        w *= params.alpha[k - 1] ** nk
    return w


def random_walk_weight(e: Excursion, lam: float) -> float:
    """Probability that the walk draws ``e`` and then steps down."""
    return lam ** e.n * (1 - lam) ** (e.n + 1)


# -- sampling -------------------------------------------------------------

def make_rng(seed: int | None) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _check_tail(params: MeasureParams, tol: float) -> None:
    if params.tail_bound > tol:
        raise TruncationError(f"tail bound {params.tail_bound:.3g} exceeds tolerance {tol:.3g}")


def sample_diagram(params: MeasureParams, rng: np.random.Generator) -> SlotDiagram:
    q = np.asarray(params.q)
    hits = np.flatnonzero(rng.random(params.K) < 1 - q)
    if hits.size == 0:
        return SlotDiagram(())
    m = int(hits[-1]) + 1
    comps: dict[int, tuple[int, ...]] = {m: (int(rng.geometric(q[m - 1])),)}
    counts = [0] * (m + 1)
    counts[m] = comps[m][0]
    for k in range(m - 1, 0, -1):
        s = 1 + 2 * sum((l - k) * counts[l] for l in range(k + 1, m + 1))
        x = rng.geometric(q[k - 1], size=s) - 1
        comps[k] = tuple(int(v) for v in x)
        counts[k] = int(x.sum())
    return SlotDiagram(tuple(comps[k] for k in range(1, m + 1)))


def sample_excursion(params: MeasureParams, seed: int | None = None, rng: np.random.Generator | None = None,
                     tol: float = 1e-12) -> tuple[SlotDiagram, Excursion]:
    _check_tail(params, tol)
    if rng is None:
        rng = make_rng(seed)
    d = sample_diagram(params, rng)
    return d, build_excursion(d)


def sample_excursions(params: MeasureParams, count: int, seed: int | None = None,
                      tol: float = 1e-12) -> list[tuple[SlotDiagram, Excursion]]:
    _check_tail(params, tol)
    rng = make_rng(seed)
    out = []
    cache: dict[SlotDiagram, Excursion] = {}
    for _ in range(count):
        d = sample_diagram(params, rng)
        e = cache.get(d)
        if e is None:
            e = cache[d] = build_excursion(d)
        out.append((d, e))
    return out


def sample_bernoulli_config(lam: float, length: int, seed: int | None = None, origin: int = 1) -> BallConfig:
    """I.i.d. Bernoulli(``lam``) occupancy of boxes ``origin .. origin + length - 1``."""
    if not 0 <= lam < 0.5:
        raise UnsupportedDensityError(f"lambda must lie in [0, 1/2), got {lam}")
    rng = make_rng(seed)
    bits = rng.random(length) < lam
    return BallConfig(origin, bits.astype(np.uint8).tobytes())


# -- zeta concatenation ---------------------------------------------------

@dataclass(frozen=True)
class ZetaArray:
    """Rows ``zeta_k`` built by laying the ``k``-components side by side.

    ``offsets[k - 1][i]`` is ``S_k`` for the ``i``-th diagram of the input
    list, measured from the diagram at ``zero_index``.  Row ``k`` is stored
    as ``(start, values)``: ``values[j]`` is ``zeta_k(start + j)``.
    """

    rows: tuple[tuple[int, tuple[int, ...]], ...]
    offsets: tuple[tuple[int, ...], ...]
    zero_index: int = 0

    @property
    def height(self) -> int:
        return len(self.rows)

    def __call__(self, k: int, j: int) -> int:
        if k > self.height:
            return 0
        start, values = self.rows[k - 1]
        i = j - start
        return values[i] if 0 <= i < len(values) else 0

    def row(self, k: int) -> tuple[int, ...]:
        return self.rows[k - 1][1]

    def slot_counts(self, k: int) -> tuple[int, ...]:
        start, values = self.rows[k - 1]
        off = self.offsets[k - 1]
        ends = off[1:] + (start + len(values),)
        return tuple(b - a for a, b in zip(off, ends))

    def diagrams(self) -> list[SlotDiagram]:
        """Split the rows back into the original diagrams."""
        count = len(self.offsets[0]) if self.offsets else 0
        out = []
        for i in range(count):
            comps = []
            for k in range(1, self.height + 1):
                start, values = self.rows[k - 1]
                a = self.offsets[k - 1][i] - start
                b = a + self.slot_counts(k)[i]
                comps.append(values[a:b])
            while comps and not any(comps[-1]):
                comps.pop()
            out.append(SlotDiagram(tuple(comps)))
        return out


def zeta_concat(diagrams: Sequence[SlotDiagram], zero_index: int = 0, height: int | None = None) -> ZetaArray:
    """``S_k^{i+1} = S_k^i + s_k^i`` with ``S_k = 0`` at ``zero_index``."""
    if height is None:
        height = max((d.m for d in diagrams), default=0) or 1
    rows = []
    offsets = []
    for k in range(1, height + 1):
        comps = [d.component(k) if k <= d.m else (0,) for d in diagrams]
        starts = [0]
        for c in comps:
            starts.append(starts[-1] + len(c))
        shift = starts[zero_index] if diagrams else 0
        offsets.append(tuple(s - shift for s in starts[:-1]))
        values = tuple(v for c in comps for v in c)
        rows.append((-shift, values))
    return ZetaArray(tuple(rows), tuple(offsets), zero_index)


def zeta_of_config(config: BallConfig, height: int | None = None) -> ZetaArray:
    """Zeta rows of every excursion of ``config`` between its outer records."""
    diagrams = [slot_diagram(e, "HT") for _, e in excursion_sequence(config)]
    return zeta_concat(diagrams, 0, height)
