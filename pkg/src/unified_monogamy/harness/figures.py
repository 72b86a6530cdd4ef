"""Reproduction of the two worked examples (three-qubit canonical state).

The curves are generated from the printed closed forms.  The audit files put
those printed pairwise values next to what the measures module computes for
the same state, without correcting either side.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Optional

import numpy as np

from ..entropy import EntropyParams
from ..measures import MAX, MIN, RoofOptions, convex_roof, pure_state_ue, tsallis2_two_qubit
from ..states import PartitionSpec, build_generalized_schmidt, example_schmidt_params, reduce
from .svg import LineChart

TSALLIS2 = EntropyParams(2.0, 1.0)
ASSERT_TOL = 1e-12

# The printed pairwise formulas (C_AB = 2 l0 l2, C_AC = 2 l0 l3) match the
# literal |ABC> amplitudes only after swapping B and C, so "AB" below is the
# reduction onto parties (0, 2) and "AC" the one onto (0, 1).
PRINTED_PAIRS = {"AB": (0, 2), "AC": (0, 1)}

EXAMPLE1_K = 0.75
EXAMPLE2_K = 2.0 / 3.0


class FigureError(ValueError):
    pass


def fmt(x: float) -> str:
    return format(float(x), ".12g")


def example1_curves(alpha):
    a = np.asarray(alpha, dtype=float)
    lhs = (4 / 9) ** a
    y1 = (1 / 6) ** a + (7 / 27) ** a - (4 / 27) ** a
    y2 = (1 / 6) ** a + a * (1 / 9) ** a
    return lhs, y1, y2


def example2_curves(beta):
    b = np.asarray(beta, dtype=float)
    lhs = (4 / 9) ** b
    y3 = (1 / 3) ** b + (5 / 18) ** b - (1 / 6) ** b
    y4 = (1 / 3) ** b + b * (1 / 9) ** b
    return lhs, y3, y4


def _grid(lo: float, hi: float, steps: int) -> np.ndarray:
    if steps < 2:
        raise FigureError("steps must be at least 2")
    if not hi > lo:
        raise FigureError(f"sweep span must be positive, got [{lo}, {hi}]")
    return np.linspace(lo, hi, steps)


def _write_csv(path: Path, header, columns) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in zip(*columns):
            w.writerow([fmt(x) for x in row])


def _prepare(out_dir) -> Path:
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise FigureError(f"cannot create output directory {out}: {exc.strerror}") from exc
    return out


def example1_audit(opts: Optional[RoofOptions] = None) -> dict:
    """Convex-roof values for the example state next to the printed ones."""
    psi = build_generalized_schmidt(example_schmidt_params())
    lhs = pure_state_ue(psi, PartitionSpec(0, (1, 2)), TSALLIS2)
    printed = {"AB": 1 / 6, "AC": 1 / 9}
    closed = {"AB": 1 / 3, "AC": 1 / 9}
    pairs = {}
    for name, parties in PRINTED_PAIRS.items():
        rho = reduce(psi, parties)
        res = convex_roof(rho, PartitionSpec(0, (1,)), TSALLIS2, MIN, opts)
        spread = abs(res.restart_values[0] - res.restart_values[1]) if len(res.restart_values) > 1 else None
        pairs[name] = {
            "parties": list(parties),
            "convex_roof_min": res.value,
            "converged": res.converged,
            "restart_spread": spread,
            "restarts_used": res.restarts_used,
            "concurrence_sq_over_2": tsallis2_two_qubit(rho),
            "closed_form_2_l0sq_lsq": closed[name],
            "printed": printed[name],
            "matches_printed": abs(res.value - printed[name]) < 1e-6,
            "matches_closed_form": abs(res.value - closed[name]) < 1e-6,
        }
    computed = [pairs["AB"]["convex_roof_min"], pairs["AC"]["convex_roof_min"]]
    return {
        "state": {"lambdas": list(example_schmidt_params().lambdas), "phi": 0.0},
        "q": 2.0, "s": 1.0, "k": EXAMPLE1_K, "delta": 1.0,
        "lhs_T2_A_BC": {"computed": lhs, "printed": 4 / 9},
        "pairs": pairs,
        "discrepancy": not pairs["AB"]["matches_printed"],
        "note": ("printed T2(rho_AB) = l0^2 l2^2 = 1/6; the convex roof and C^2/2 give 2 l0^2 l2^2. "
                 "Curves use the printed value; both numbers are reported here."),
        "alpha1_plain_slack": {"printed": 4 / 9 - sum(printed.values()), "computed": lhs - sum(computed)},
    }


def example2_audit(opts: Optional[RoofOptions] = None) -> dict:
    psi = build_generalized_schmidt(example_schmidt_params())
    lhs = pure_state_ue(psi, PartitionSpec(0, (1, 2)), TSALLIS2)
    printed = {"AB": 1 / 3, "AC": 1 / 9}
    pairs = {}
    for name, parties in PRINTED_PAIRS.items():
        rho = reduce(psi, parties)
        res = convex_roof(rho, PartitionSpec(0, (1,)), TSALLIS2, MAX, opts)
        pairs[name] = {
            "parties": list(parties),
            "convex_roof_max": res.value,
            "converged": res.converged,
            "printed": printed[name],
            "matches_printed": abs(res.value - printed[name]) < 1e-6,
        }
    return {
        "q": 2.0, "s": 1.0, "k": EXAMPLE2_K, "delta": 1.0,
        "lhs_T2a_A_BC": {"computed": lhs, "printed": 4 / 9},
        "pairs": pairs,
        "discrepancy": not all(p["matches_printed"] for p in pairs.values()),
    }


def cmd_example1(alpha_max: float = 5.0, steps: int = 81, out_dir=".", audit: bool = True,
                 opts: Optional[RoofOptions] = None) -> dict:
    """Write ``example1.csv``, ``example1.svg`` and ``example1_audit.json``."""
    if alpha_max < 1:
        raise FigureError("alpha_max must be >= 1")
    alpha = _grid(1.0, alpha_max, steps)
    lhs, y1, y2 = example1_curves(alpha)
    if np.any(y1 < y2 - ASSERT_TOL):
        raise FigureError("tightened bound fell below the baseline")
    out = _prepare(out_dir)
    paths = {"csv": out / "example1.csv", "svg": out / "example1.svg"}
    _write_csv(paths["csv"], ["alpha", "lhs", "y1", "y2"], [alpha, lhs, y1, y2])

    chart = LineChart(title="Example 1: T2 of |psi>_A|BC and lower bounds", xlabel="alpha", ylabel="value")
    chart.add("T2^alpha(|psi>_A|BC)", alpha, lhs, "solid")
    chart.add("y1 (Hamming, k=3/4)", alpha, y1, "dashed")
    chart.add("y2 (baseline)", alpha, y2, "dotdash")
    chart.save(paths["svg"])

    meta = {"sweep": {"alpha_min": 1.0, "alpha_max": float(alpha_max), "steps": int(steps)}}
    if audit:
        meta.update(example1_audit(opts))
        paths["audit"] = out / "example1_audit.json"
        paths["audit"].write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
    return {"paths": paths, "alpha": alpha, "lhs": lhs, "y1": y1, "y2": y2, "meta": meta}


def cmd_example2(beta_min: float = 0.0, steps: int = 81, out_dir=".", audit: bool = False,
                 opts: Optional[RoofOptions] = None) -> dict:
    """Write ``example2.csv`` and ``example2.svg`` (plus an optional UEoA audit)."""
    if not 0 <= beta_min < 1:
        raise FigureError("beta_min must lie in [0, 1)")
    beta = _grid(beta_min, 1.0, steps)
    lhs, y3, y4 = example2_curves(beta)
    if np.any(y3 > y4 + ASSERT_TOL) or np.any(lhs > y3 + ASSERT_TOL):
        raise FigureError("polygamy bound ordering failed on the grid")
    out = _prepare(out_dir)
    paths = {"csv": out / "example2.csv", "svg": out / "example2.svg"}
    _write_csv(paths["csv"], ["beta", "lhs", "y3", "y4"], [beta, lhs, y3, y4])

    chart = LineChart(title="Example 2: T2a of |psi>_A|BC and upper bounds", xlabel="beta", ylabel="value")
    chart.add("T2a^beta(|psi>_A|BC)", beta, lhs, "solid")
    chart.add("y3 (Hamming, k=2/3)", beta, y3, "dashed")
    chart.add("y4 (baseline)", beta, y4, "dotdash")
    chart.save(paths["svg"])

    meta = {"sweep": {"beta_min": float(beta_min), "beta_max": 1.0, "steps": int(steps)}}
    if audit:
        meta.update(example2_audit(opts))
    paths["meta"] = out / "example2_meta.json"
    paths["meta"].write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
    return {"paths": paths, "beta": beta, "lhs": lhs, "y3": y3, "y4": y4, "meta": meta}


def margin_ratio(alpha) -> np.ndarray:
    _, y1, y2 = example1_curves(alpha)
    return y1 / y2


__all__ = ["cmd_example1", "cmd_example2", "example1_audit", "example2_audit",
           "example1_curves", "example2_curves", "margin_ratio", "FigureError"]
