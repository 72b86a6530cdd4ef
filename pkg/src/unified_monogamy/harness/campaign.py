"""Seeded Monte-Carlo verification campaigns over Haar-random pure states."""

from __future__ import annotations

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

from ..bounds import (
    MODES,
    MONOGAMY,
    NEGATIVE,
    POLYGAMY,
    BoundReport,
    BoundsError,
    TighteningParams,
    check_domain,
    global_value,
    pairwise_values,
    report_from_values,
)
from ..entropy import EntropyParams
from ..measures import RoofOptions, is_tsallis2, validate_tsallis2_fast_path
from ..states import PartitionSpec, haar_random_pure, sample_seed

logger = logging.getLogger(__name__)

PURE_TOL = 1e-7
ROOF_TOL = 5e-4
HIERARCHY_TOL = 1e-12


class ConfigError(ValueError):
    pass


@dataclass
class CampaignConfig:
    n_states: int = 1000
    n_qubits: int = 3
    q: float = 2.0
    s: float = 1.0
    exponents: list[float] = field(default_factory=lambda: [1.0, 1.5, 2.0, 3.0])
    k: float = 0.75
    delta: float = 1.0
    seed: int = 12345
    mode: str = MONOGAMY
    out_dir: str = "campaign_out"
    workers: int = 1
    restarts: int = 8
    tolerance: Optional[float] = None
    fast_path_check: int = 200

    def validate(self) -> None:
        if self.n_states < 1:
            raise ConfigError("n_states must be positive")
        if self.n_qubits not in (3, 4):
            raise ConfigError("n_qubits must be 3 or 4")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}")
        if not self.exponents:
            raise ConfigError("exponent grid is empty")
        if self.workers < 1 or self.restarts < 1:
            raise ConfigError("workers and restarts must be positive")
        try:
            p = EntropyParams(self.q, self.s)
            for x in self.exponents:
                TighteningParams(self.k, self.delta, x).check_mode(self.mode)
            check_domain(p, self.mode)
        except (BoundsError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc

    @property
    def violation_tol(self) -> float:
        if self.tolerance is not None:
            return self.tolerance
        return ROOF_TOL if self.mode == POLYGAMY else PURE_TOL

    @classmethod
    def from_dict(cls, data: dict) -> "CampaignConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_file(cls, path) -> "CampaignConfig":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"{path}: {exc.strerror}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: config must be a JSON object")
        return cls.from_dict(data)


def _sample(args) -> list[dict]:
    """Evaluate one random state for every exponent in the grid."""
    cfg, index, fast_path = args
    seed = sample_seed(cfg.seed, index)
    psi = haar_random_pure(cfg.n_qubits, seed)
    part = PartitionSpec(0, tuple(range(1, cfg.n_qubits)))
    p = EntropyParams(cfg.q, cfg.s)
    opts = RoofOptions(restarts=cfg.restarts, seed=seed)
    lhs_base = global_value(psi, part, p, cfg.mode, opts)
    values = pairwise_values(psi, part, p, cfg.mode, opts, fast_path=fast_path)
    rows = []
    for x in cfg.exponents:
        t = TighteningParams(cfg.k, cfg.delta, x)
        rep = report_from_values(lhs_base, values, p, t, cfg.mode, labels=part.others)
        rows.append({"sample": index, "seed": seed, **rep.to_dict()})
    return rows


def hierarchy_ok(rep: dict, mode: str) -> bool:
    """Check the RHS chain on one report; vacuous when preconditions fail."""
    if mode == NEGATIVE:
        return True
    rhs, pre = rep["rhs"], rep["preconditions"]
    chain = ["kim-hamming"]
    if pre["hamming"]:
        chain.append("hamming")
        if pre["positional"]:
            chain.append("positional")
    vals = [rhs[name] for name in chain]
    for lo, hi in zip(vals, vals[1:]):
        tol = HIERARCHY_TOL * max(1.0, abs(lo))
        if mode == MONOGAMY and hi < lo - tol:
            return False
        if mode == POLYGAMY and hi > lo + tol:
            return False
    return True


def summarize(rows: list[dict], cfg: CampaignConfig) -> dict:
    tol = cfg.violation_tol
    per_exp = {}
    violations = 0
    findings = 0
    hierarchy_failures = 0
    for x in cfg.exponents:
        sel = [r for r in rows if r["params"]["exponent"] == x]
        bounds = {}
        names = sorted({n for r in sel for n in r["preconditions"]})
        for name in names:
            held = [r for r in sel if r["preconditions"].get(name)]
            slacks = [r["slack"][name] for r in held if name in r["slack"]]
            bad = sum(s < -tol for s in slacks)
            unheld = [r["slack"][name] for r in sel if not r["preconditions"].get(name) and name in r["slack"]]
            neg_unheld = sum(s < -tol for s in unheld)
            violations += bad
            findings += neg_unheld
            bounds[name] = {
                "precondition_pass_rate": len(held) / len(sel) if sel else 0.0,
                "min_slack": min(slacks) if slacks else None,
                "violations": bad,
                "negative_slack_without_precondition": neg_unheld,
            }
        hf = sum(not hierarchy_ok(r, cfg.mode) for r in sel)
        hierarchy_failures += hf
        per_exp[repr(float(x))] = {"bounds": bounds, "hierarchy_failures": hf}
    return {
        "config": asdict(cfg),
        "tolerance": tol,
        "n_reports": len(rows),
        "violations": violations,
        "hierarchy_failures": hierarchy_failures,
        "findings_without_precondition": findings,
        "by_exponent": per_exp,
    }


def cmd_campaign(cfg: CampaignConfig, fast_path: Optional[bool] = None) -> dict:
    """Run a campaign and write ``reports.jsonl`` and ``summary.json``.

    Returns the summary.  ``summary["violations"]`` counts slacks below
    ``-tolerance`` among reports whose preconditions hold.
    """
    cfg.validate()
    p = EntropyParams(cfg.q, cfg.s)
    validation = None
    if fast_path is None:
        fast_path = False
        if cfg.mode != POLYGAMY and is_tsallis2(p) and cfg.fast_path_check > 0:
            validation = validate_tsallis2_fast_path(
                cfg.fast_path_check, seed=cfg.seed, opts=RoofOptions(restarts=cfg.restarts))
            fast_path = validation["passed"]
            if not fast_path:
                logger.warning("closed-form fast path failed validation; using the optimizer")

    jobs = [(cfg, i, fast_path) for i in range(cfg.n_states)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            chunks = list(pool.map(_sample, jobs, chunksize=max(1, cfg.n_states // (4 * cfg.workers))))
    else:
        chunks = [_sample(j) for j in jobs]
    rows = [row for chunk in chunks for row in chunk]

    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "reports.jsonl", "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row) + "\n")
    summary = summarize(rows, cfg)
    summary["fast_path"] = {"used": bool(fast_path), "validation": validation}
    (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
    summary["rows"] = rows
    return summary


__all__ = ["CampaignConfig", "ConfigError", "cmd_campaign", "summarize", "hierarchy_ok", "BoundReport"]
