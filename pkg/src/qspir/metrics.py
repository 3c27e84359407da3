"""Cost, rate and security summaries for protocol runs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import _validation as _v
from .exceptions import InvariantViolation
from .protocols import (
    ProtocolConfig,
    ProtocolTranscript,
    download_cost,
    make_queries,
    run_classical_baseline,
    run_qspir,
    run_qspir_three_server,
)
from .secrecy import ProtocolFamily, SecurityReport, evaluate, format_real

__all__ = [
    "BETA_TOL",
    "LEMMA1_TOL",
    "GAMMA_CROSS_TOL",
    "MetricsReport",
    "theoretical_rate",
    "classical_rate",
    "run_transcripts",
    "measure_cell",
    "rate_table",
    "theta_trend",
]

BETA_TOL = 1e-9
LEMMA1_TOL = 1e-12
GAMMA_CROSS_TOL = 1e-12


def theoretical_rate(n: int) -> Fraction:
    return Fraction(1, math.ceil(n / 2))


def classical_rate(n: int) -> Fraction:
    return Fraction(1, n)


def _rate_fields(num: int, den: int) -> dict:
    r = Fraction(num, den)
    return {"rate": format_real(r), "rate_unreduced": f"{num}/{den}", "rate_decimal": format_real(float(r))}


@dataclass
class MetricsReport:
    """Costs, rate and (optionally) security measures of one (N, F, l) cell."""

    protocol: str
    n: int
    f: int
    blocks: int
    upload_bits: int
    raw_download: tuple[int, int]
    runs: int = 0
    branches: int = 0
    security: SecurityReport | None = None
    failures: list[str] = field(default_factory=list)

    @property
    def download_qubit_equivalents(self) -> int:
        return sum(self.raw_download)

    @property
    def rate(self) -> Fraction:
        return Fraction(2 * self.blocks, self.download_qubit_equivalents)

    @property
    def theta_ratio(self) -> Fraction:
        """``log2 U / log2 D`` with ``U = 2^(NF)`` and ``D = 2^download``."""
        return Fraction(self.upload_bits, self.download_qubit_equivalents)

    @property
    def alpha(self):
        return None if self.security is None else self.security.alpha

    @property
    def beta_bits(self):
        return None if self.security is None else self.security.beta_bits

    @property
    def gamma_bits(self):
        return None if self.security is None else self.security.gamma_bits

    def to_dict(self) -> dict:
        out = {
            "protocol": self.protocol,
            "n": self.n,
            "f": self.f,
            "blocks": self.blocks,
            "upload_bits": self.upload_bits,
            "download_qubits": self.raw_download[0],
            "download_cbits": self.raw_download[1],
            "download_qubit_equivalents": self.download_qubit_equivalents,
            "theta_ratio": format_real(self.theta_ratio),
            "theta_ratio_decimal": format_real(float(self.theta_ratio)),
            "runs": self.runs,
            "branches": self.branches,
            "status": "fail" if self.failures else "ok",
            "failures": list(self.failures),
            **_rate_fields(2 * self.blocks, self.download_qubit_equivalents),
        }
        if self.security is not None:
            sec = self.security.to_dict()
            sec.pop("family")
            out.update(sec)
        return out


def run_transcripts(
    protocol: str, config: ProtocolConfig, *, variant: str = "standard", query_rule: str = "uniform"
) -> list[ProtocolTranscript]:
    rng = np.random.default_rng(config.rng_seed)
    queries = make_queries(config.n_servers, config.n_files, config.query_index, rng, query_rule)
    if protocol == "classical":
        return [run_classical_baseline(config, queries)]
    if protocol == "qspir3":
        if variant != "standard":
            raise ValueError("qspir3 runs the standard protocol only")
        return run_qspir_three_server(config, queries)
    return run_qspir(config, queries, variant=variant)


def _check(failures: list[str], ok: bool, name: str, detail: str) -> None:
    if not ok:
        failures.append(f"{name}: {detail}")


def measure_cell(
    protocol: str,
    n: int,
    f: int,
    blocks: int,
    *,
    ks: Sequence[int] | None = None,
    mode: str = "sample",
    backend: str = "frame",
    seed: int = 0,
    checks: Iterable[str] = (),
    variant: str = "standard",
    query_rule: str = "uniform",
) -> MetricsReport:
    """Run one cell for every requested K and evaluate the security checks.

    Files are drawn from ``seed``; each K gets its own run seed. Violated
    invariants are collected in ``failures`` rather than raised.
    """
    family = ProtocolFamily(protocol, n, f, blocks, variant, query_rule)
    ks = list(range(1, f + 1)) if ks is None else [_v.check_query_index(k, f) for k in ks]
    rng = np.random.default_rng(seed)
    files = rng.integers(0, 4, size=(f, blocks))
    failures: list[str] = []
    if protocol == "classical":
        raw = (0, 2 * n * blocks)
    else:
        q, c, _ = download_cost(n, blocks)
        raw = (q, c)
    report = MetricsReport(protocol, n, f, blocks, n * f, raw)
    for k in ks:
        config = ProtocolConfig(n, f, blocks, k, tuple(files), backend=backend, rng_seed=seed + k, mode=mode)
        transcripts = run_transcripts(protocol, config, variant=variant, query_rule=query_rule)
        report.runs += 1
        report.branches += len(transcripts)
        wrong = sum(not t.correct for t in transcripts)
        _check(failures, wrong == 0, "correctness", f"K={k}: {wrong} of {len(transcripts)} branches decoded the wrong file")
        if mode == "enumerate":
            total = sum(t.probability for t in transcripts)
            _check(failures, abs(total - 1) <= 1e-12, "branch_probabilities", f"K={k}: sum {total}")
        for t in transcripts:
            if t.uploaded_bits != n * f or (t.downloaded_qubits, t.downloaded_cbits) != raw:
                _check(failures, False, "cost_accounting", f"K={k}: transcript costs differ from the layout")
                break
    expected = classical_rate(n) if protocol == "classical" else theoretical_rate(n)
    _check(failures, report.rate == expected, "rate", f"measured {report.rate}, expected {expected}")

    checks = set(checks)
    if checks:
        report.security = evaluate(family, checks)
        sec = report.security
        if sec.alpha is not None:
            _check(failures, sec.alpha == 0, "alpha_zero", f"alpha = {sec.alpha}")
        if sec.per_server_gamma is not None:
            nonzero = [t for t, mi in sec.per_server_gamma.items() if not mi.is_zero]
            _check(failures, not nonzero, "gamma_zero", f"gamma = {sec.gamma_exact} (servers {nonzero})")
            gap = max(abs(sec.per_server_gamma[t].bits - sec.gamma_holevo[t]) for t in sec.gamma_holevo)
            _check(failures, gap <= GAMMA_CROSS_TOL, "gamma_cross_check", f"exact and Holevo evaluations differ by {gap}")
        if sec.per_pair_beta is not None and protocol != "classical":
            _check(failures, sec.beta_bits <= BETA_TOL, "beta_zero", f"beta = {sec.beta_bits}")
        if sec.lemma1 is not None:
            _check(failures, sec.lemma1.max_distance <= LEMMA1_TOL, "lemma1", f"trace distance {sec.lemma1.max_distance}")
    report.failures = failures
    return report


def rate_table(n_range: Iterable[int] = range(2, 8), blocks: int = 1, seed: int = 0) -> list[dict]:
    """Measured quantum and classical rates against ``ceil(N/2)^-1`` and ``1/N``."""
    rows = []
    for n in n_range:
        _v.check_int(n, "n", 2, 7)
        config = ProtocolConfig.random(n, 2, blocks, 1, rng=seed, rng_seed=seed)
        quantum = run_qspir(config)[0]
        classical = run_classical_baseline(config)
        if not (quantum.correct and classical.correct):
            raise InvariantViolation("correctness", f"rate-table run for N={n} decoded the wrong file")
        rows.append(
            {
                "n": n,
                "blocks": blocks,
                "quantum_rate": format_real(quantum.rate),
                "quantum_rate_unreduced": f"{2 * blocks}/{quantum.downloaded_qubit_equivalents}",
                "theoretical_rate": format_real(theoretical_rate(n)),
                "classical_rate": format_real(classical.rate),
                "classical_theoretical": format_real(classical_rate(n)),
                "quantum_matches": quantum.rate == theoretical_rate(n),
                "classical_matches": classical.rate == classical_rate(n),
            }
        )
    return rows


def theta_trend(n: int, f: int, blocks_range: Iterable[int] = range(1, 17)) -> list[dict]:
    """``theta = NF / download`` for increasing block counts."""
    blocks_range = list(blocks_range)
    if any(b <= a for a, b in zip(blocks_range, blocks_range[1:])):
        raise ValueError("blocks_range must be strictly increasing")
    rows = []
    for ell in blocks_range:
        _, _, qe = download_cost(n, ell)
        theta = Fraction(n * f, qe)
        rows.append({"n": n, "f": f, "blocks": ell, "theta": format_real(theta), "theta_decimal": format_real(float(theta))})
    return rows
