"""Hamming-weight monogamy and polygamy bounds on powers of unified entanglement.

Bound names used in reports:

``plain``
    sum of pairwise values, compared at exponent 1.
``kim-hamming`` / ``kim-positional``
    baseline bounds with coefficient ``exponent`` raised to ``w_H(j)`` or ``j``.
``hamming`` / ``positional``
    tightened bounds with coefficient ``((1 + k^d)^x - 1) / k^(d x)``.
``thm3``
    mean of negative powers, an upper bound on the negative power of the whole.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .entropy import EntropyParams, classify_domain
from .measures import (
    MAX,
    MIN,
    RoofOptions,
    convex_roof,
    pure_state_ue,
    ue_two_qubit,
)
from .states import DensityMatrix, PartitionSpec, PureState, State, reduce

MONOGAMY = "monogamy"
POLYGAMY = "polygamy"
NEGATIVE = "negative-power"
MODES = (MONOGAMY, POLYGAMY, NEGATIVE)

WEIGHTINGS = ("hamming", "positional", "kim-hamming", "kim-positional", "plain")

HIERARCHY_TOL = 1e-12


class BoundsError(ValueError):
    pass


@dataclass(frozen=True)
class TighteningParams:
    k: float
    delta: float
    exponent: float

    def __post_init__(self):
        if not 0 < self.k <= 1:
            raise BoundsError(f"k must lie in (0, 1], got {self.k}")
        if not self.delta >= 1:
            raise BoundsError(f"delta must be >= 1, got {self.delta}")
        if not math.isfinite(self.exponent):
            raise BoundsError("exponent must be finite")

    def check_mode(self, mode: str) -> None:
        x = self.exponent
        ok = {MONOGAMY: x >= 1, POLYGAMY: 0 <= x <= 1, NEGATIVE: x < 0}
        if mode not in ok:
            raise BoundsError(f"unknown mode {mode!r}")
        if not ok[mode]:
            raise BoundsError(f"exponent {x} is outside the {mode} range")

    @property
    def gap(self) -> float:
        """``k**delta``, the ratio allowed between consecutive pairwise values."""
        return self.k**self.delta


def hamming_weight(j: int) -> int:
    if j < 0:
        raise BoundsError("hamming weight is defined for nonnegative integers")
    return int(j).bit_count()


def tightening_coefficient(t: TighteningParams) -> float:
    """``((1 + k^d)^x - 1) / k^(d x)`` for exponent ``x``."""
    x = t.exponent
    g = t.gap
    return math.expm1(x * math.log1p(g)) / g**x


def check_ordering_thm1(values: Sequence[float], t: TighteningParams) -> tuple[list[int], bool]:
    """Sort descending; report whether ``k^d v_j >= v_{j+1}`` holds throughout."""
    vals = np.asarray(values, dtype=float)
    perm = sorted(range(len(vals)), key=lambda i: (-vals[i], i))
    s = vals[perm]
    ok = bool(np.all(t.gap * s[:-1] >= s[1:])) if len(s) > 1 else True
    return perm, ok


def check_condition_thm2(values: Sequence[float], t: TighteningParams) -> bool:
    """``k^d v_i >= sum_{j > i} v_j`` for every ``i`` (values taken in the given order)."""
    v = np.asarray(values, dtype=float)
    tails = np.cumsum(v[::-1])[::-1]
    return bool(all(t.gap * v[i] >= tails[i + 1] for i in range(len(v) - 1)))


def weighted_power_sum(values: Sequence[float], t: TighteningParams, weighting: str) -> float:
    v = np.asarray(values, dtype=float)
    if weighting == "plain":
        return float(v.sum())
    if weighting not in WEIGHTINGS:
        raise BoundsError(f"unknown weighting {weighting!r}")
    if weighting.startswith("kim"):
        c = t.exponent
    else:
        c = tightening_coefficient(t)
    if weighting.endswith("hamming"):
        powers = [hamming_weight(j) for j in range(len(v))]
    else:
        powers = list(range(len(v)))
    return float(sum(c**w * x**t.exponent for w, x in zip(powers, v)))


def thm3_upper_bound(values: Sequence[float], alpha: float) -> float:
    """Mean of ``v_j ** alpha`` for ``alpha < 0``; every value must be positive."""
    if alpha >= 0:
        raise BoundsError(f"alpha must be negative, got {alpha}")
    v = np.asarray(values, dtype=float)
    if v.size == 0 or np.any(v <= 0):
        raise BoundsError("every pairwise value must be nonzero for the negative-power bound")
    return float(np.mean(v**alpha))


@dataclass
class BoundReport:
    mode: str
    lhs: float
    lhs_base: float
    pairwise: list[float]
    ordering: list[int]
    rhs: dict[str, float] = field(default_factory=dict)
    slack: dict[str, float] = field(default_factory=dict)
    preconditions: dict[str, bool] = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "lhs": self.lhs,
            "lhs_base": self.lhs_base,
            "pairwise": list(self.pairwise),
            "ordering": list(self.ordering),
            "rhs": dict(self.rhs),
            "slack": dict(self.slack),
            "preconditions": dict(self.preconditions),
            "params": dict(self.params),
        }


def report_from_values(lhs_base: float, values: Sequence[float], p: EntropyParams,
                       t: TighteningParams, mode: str, labels: Optional[Sequence[int]] = None) -> BoundReport:
    """Assemble a :class:`BoundReport` from precomputed measure values.

    ``values`` are the pairwise measures in party order; ``labels`` name the
    parties (defaults to ``0..N-1``) so the recorded ordering is meaningful.
    """
    t.check_mode(mode)
    labels = list(range(len(values))) if labels is None else list(labels)
    perm, ordered_ok = check_ordering_thm1(values, t)
    v = [float(values[i]) for i in perm]
    x = t.exponent
    lhs = float(lhs_base) ** x if lhs_base > 0 or x >= 0 else math.inf
    rep = BoundReport(mode=mode, lhs=lhs, lhs_base=float(lhs_base), pairwise=v,
                      ordering=[labels[i] for i in perm],
                      params={"q": p.q, "s": p.s, "k": t.k, "delta": t.delta, "exponent": x})

    if mode == NEGATIVE:
        ok = all(val > 0 for val in v)
        rep.preconditions["thm3"] = ok
        if ok:
            rep.rhs["thm3"] = thm3_upper_bound(v, x)
            rep.slack["thm3"] = rep.rhs["thm3"] - rep.lhs
        return rep

    unit = TighteningParams(1.0, 1.0, x)
    rep.preconditions = {
        "plain": True,
        "kim-hamming": True,
        "hamming": ordered_ok,
        "kim-positional": check_condition_thm2(v, unit),
        "positional": check_condition_thm2(v, t),
    }
    for name in ("plain", "kim-hamming", "hamming", "kim-positional", "positional"):
        if name in ("kim-positional", "positional") and not rep.preconditions[name]:
            continue
        rep.rhs[name] = weighted_power_sum(v, t, name)
    for name, r in rep.rhs.items():
        left = rep.lhs_base if name == "plain" else rep.lhs
        rep.slack[name] = left - r if mode == MONOGAMY else r - left

    if mode == MONOGAMY:
        h, kh = rep.rhs["hamming"], rep.rhs["kim-hamming"]
        if h < kh - HIERARCHY_TOL * max(1.0, abs(kh)):
            raise AssertionError(f"tightened RHS {h!r} fell below the baseline {kh!r}")
    return rep


def _pure_global(state: State) -> Optional[PureState]:
    if isinstance(state, PureState):
        return state
    vals, vecs = np.linalg.eigh(state.matrix)
    if vals[-1] > 1 - 1e-10:
        v = vecs[:, -1]
        return PureState(state.dims, v / np.linalg.norm(v))
    return None


def pairwise_values(state: State, part: PartitionSpec, p: EntropyParams, mode: str,
                    opts: Optional[RoofOptions] = None, fast_path: Optional[bool] = None) -> list[float]:
    """UE (monogamy, negative-power) or UEoA (polygamy) of each ``rho_{A B_j}``."""
    out = []
    for b in part.others:
        pair = reduce(state, [part.focus, b])
        if mode == POLYGAMY:
            out.append(convex_roof(pair, PartitionSpec(0, (1,)), p, MAX, opts).value)
        elif pair.dims == (2, 2):
            out.append(ue_two_qubit(pair, p, opts, fast_path=fast_path))
        else:
            out.append(convex_roof(pair, PartitionSpec(0, (1,)), p, MIN, opts).value)
    return out


def global_value(state: State, part: PartitionSpec, p: EntropyParams, mode: str,
                 opts: Optional[RoofOptions] = None, mixed_lhs: bool = False) -> float:
    """UE / UEoA of the whole ``A | B_0 ... B_{N-1}`` split."""
    part.validate(state.n_parties)
    if sorted(part.parties()) != list(range(state.n_parties)):
        raise BoundsError("partition must cover every party of the state")
    pure = _pure_global(state)
    if pure is not None:
        # a rank-one state has a single ensemble, so UE and UEoA coincide
        return pure_state_ue(pure, part, p)
    assert isinstance(state, DensityMatrix)
    if not mixed_lhs:
        raise BoundsError("mixed global state: enable mixed_lhs to use the convex roof")
    if state.n_parties != 3 or state.rank() > 2:
        raise BoundsError("mixed LHS is supported for three-qubit states of rank <= 2 only")
    direction = MAX if mode == POLYGAMY else MIN
    return convex_roof(state, part, p, direction, opts).value


def check_domain(p: EntropyParams, mode: str) -> None:
    flags = classify_domain(p)
    need = flags.polygamy_valid if mode == POLYGAMY else flags.monogamy_valid
    if not need:
        raise BoundsError(f"(q, s) = ({p.q}, {p.s}) is outside the {mode} domain")


def evaluate_bounds(state: State, part: PartitionSpec, p: EntropyParams, t: TighteningParams, mode: str,
                    opts: Optional[RoofOptions] = None, pairwise: Optional[Sequence[float]] = None,
                    mixed_lhs: bool = False, fast_path: Optional[bool] = None) -> BoundReport:
    """Evaluate every applicable bound for one state and parameter set.

    ``pairwise`` overrides the computed pairwise measures (in ``part.others``
    order), which is how printed literature values can be checked.
    """
    if mode not in MODES:
        raise BoundsError(f"unknown mode {mode!r}")
    t.check_mode(mode)
    check_domain(p, mode)
    lhs_base = global_value(state, part, p, mode, opts, mixed_lhs)
    if pairwise is None:
        values = pairwise_values(state, part, p, mode, opts, fast_path)
    else:
        values = [float(v) for v in pairwise]
        if len(values) != part.n_others:
            raise BoundsError(f"expected {part.n_others} pairwise values, got {len(values)}")
    return report_from_values(lhs_base, values, p, t, mode, labels=part.others)
