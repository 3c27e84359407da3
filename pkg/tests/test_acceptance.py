"""Acceptance suite: one PASS/FAIL line per criterion, each at its stated tolerance."""

import itertools
import math
import time
import warnings
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from qspir.pauli import LABELS, LabelVector
from qspir.protocols import (
    ProtocolConfig,
    run_block,
    run_qspir,
    teleport_branches,
    two_sum_branches,
)
from qspir.secrecy import ProtocolFamily, error_measure, lemma1_check, prop4_check, server_secrecy, user_secrecy
from qspir.state import QuantumRegister, apply_weyl, random_pure_state

GRID = [(n, f, ell) for n in (2, 3, 4, 5) for f in (2, 3) for ell in (1, 2)]


@pytest.fixture
def verdict(capsys):
    def emit(name: str, ok: bool, detail: str, elapsed: float, budget: float | None = None):
        timing = f"{elapsed:.2f}s" + (f" (budget {budget:g}s)" if budget else "")
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'}  {name}: {detail} [{timing}]")
        assert ok, f"{name}: {detail}"
        if budget is not None:
            assert elapsed < budget, f"{name}: took {elapsed:.2f}s, budget {budget}s"

    return emit


def test_correctness_zero_error(verdict):
    start = time.perf_counter()
    branches = wrong = 0
    for n in (2, 3, 4, 5):
        for w in itertools.product(range(4), repeat=2):
            fs = tuple(LabelVector.from_ints([x]) for x in w)
            for k in (1, 2):
                ts = run_qspir(ProtocolConfig(n, 2, 1, k, fs, rng_seed=sum(w) + 7 * k, mode="enumerate"))
                branches += len(ts)
                wrong += sum(not t.correct for t in ts)
    # alpha additionally averages over every query set.
    alphas = {n: error_measure(ProtocolFamily("qspir", n, 2, 1)) for n in (2, 3, 4, 5)}
    ok = wrong == 0 and all(a == 0 for a in alphas.values())
    verdict(
        "correctness",
        ok,
        f"{branches} branches over N=2..5, F=2, l=1, all K and W; wrong={wrong}; alpha over all Q={sorted(set(map(str, alphas.values())))}",
        time.perf_counter() - start,
        10,
    )


def test_rate_and_upload(verdict):
    start = time.perf_counter()
    rows, ok = [], True
    for n in (2, 3, 4, 5, 6):
        for ell in (1, 2, 3):
            cfg = ProtocolConfig.random(n, 3, ell, 2, rng=n * 10 + ell)
            (t,) = run_qspir(cfg)
            expected = Fraction(2, n) if n % 2 == 0 else Fraction(2, n + 1)
            ok &= t.rate == expected == Fraction(1, math.ceil(n / 2))
            ok &= t.uploaded_bits == n * 3 and t.correct
        rows.append(f"N={n}:{t.rate}")
    verdict("rate", ok, "measured rates " + ", ".join(rows) + "; upload = N*F in every run", time.perf_counter() - start, 1)


def test_user_secrecy(verdict):
    start = time.perf_counter()
    zero = all(
        all(mi.is_zero for mi in user_secrecy(ProtocolFamily("qspir", n, f, ell)).exact.values()) for n, f, ell in GRID
    )
    leaky = {}
    for f in (2, 3):
        res = user_secrecy(ProtocolFamily("qspir", 3, f, 1, query_rule="leaky"))
        top = max(res.exact.values(), key=lambda mi: mi.bits)
        leaky[f] = top.terms == ((Fraction(f), Fraction(1)),) and res.max_discrepancy <= 1e-12
    verdict(
        "user secrecy",
        zero and all(leaky.values()),
        f"gamma=0 exactly on {len(GRID)} configs: {zero}; leaky rule gives log2(F) exactly for F=2,3: {all(leaky.values())}",
        time.perf_counter() - start,
        10,
    )


def test_server_secrecy(verdict):
    start = time.perf_counter()
    worst = max(max(server_secrecy(ProtocolFamily("qspir", n, f, ell)).values()) for n, f, ell in GRID)
    broken = max(server_secrecy(ProtocolFamily("qspir", 3, 2, 1, "cleartext_h2")).values())
    verdict(
        "server secrecy",
        worst <= 1e-9 and broken > 0.1,
        f"max beta on grid = {worst:.3g} bits; cleartext-H2 variant beta = {broken:.6g} bits",
        time.perf_counter() - start,
        60,
    )


def test_protocol1_exactness(verdict):
    start = time.perf_counter()
    rng = np.random.default_rng(2023)
    payloads = []
    for i in range(8):
        if i % 2:
            payloads.append(QuantumRegister(("H0", "H1"), random_pure_state(4, rng)))
        else:
            payloads.append(QuantumRegister(("H0", "H1"), np.kron([1, 0], random_pure_state(2, rng))))
    worst, count = 0.0, 0
    for y in payloads:
        for cd in LABELS:
            for br in teleport_branches(y, cd):
                (a, b), (c, d) = br.outcome, cd
                pre = apply_weyl(apply_weyl(y, "H1", br.outcome), "H1", cd).renamed({"H1": "H3"})
                post = apply_weyl(y, "H1", cd).renamed({"H1": "H3"})
                sign = (-1) ** ((a * b + b * c + a * d) % 2)
                worst = max(
                    worst,
                    float(np.abs(br.before_correction.permuted(pre.qubits).amplitudes - pre.amplitudes).max()),
                    float(np.abs(br.after_correction.permuted(post.qubits).amplitudes - sign * post.amplitudes).max()),
                )
                count += 1
    verdict(
        "protocol 1 exactness",
        worst <= 1e-12 and count == 128,
        f"{count} (payload, operation, outcome) cases; max entrywise deviation {worst:.2e}",
        time.perf_counter() - start,
        5,
    )


def test_protocol2_two_sum(verdict):
    start = time.perf_counter()
    checked, ok = 0, True
    for ab, cd in itertools.product(LABELS, repeat=2):
        for br in two_sum_branches(ab, cd):
            checked += 1
            ok &= br.outcome == ab + cd if br.probability > 1e-12 else br.state is None
    verdict("protocol 2 two-sum", ok and checked == 64, f"{checked} (input, branch) pairs", time.perf_counter() - start, 1)


def _outcome_multiset(n, h, backend):
    out = Counter()
    for b in run_block(n, h, backend):
        middle = tuple(b.outcomes[("G", t)] for t in range(2, n))
        out[(b.outcomes[("out",)], middle)] += float(b.probability)
    return out


def test_backend_equivalence(verdict):
    start = time.perf_counter()
    rng = np.random.default_rng(77)
    worst, ok = 0.0, True
    for _ in range(100):
        n = int(rng.integers(2, 5))
        h = [LABELS[i] for i in rng.integers(0, 4, size=n)]
        dense, frame = _outcome_multiset(n, h, "dense"), _outcome_multiset(n, h, "frame")
        ok &= dense.keys() == frame.keys()
        worst = max([worst] + [abs(dense[k] - frame[k]) for k in dense])
    elapsed = time.perf_counter() - start
    verdict("backend equivalence", ok and worst <= 1e-12, f"100 random configs, max probability gap {worst:.2e}", elapsed)

    cfgs = {be: ProtocolConfig.random(6, 2, 8, 1, rng=5, backend=be) for be in ("dense", "frame")}
    timings = {}
    for be, cfg in cfgs.items():
        t0 = time.perf_counter()
        for _ in range(5):
            run_qspir(cfg)
        timings[be] = (time.perf_counter() - t0) / 5
    speedup = timings["dense"] / timings["frame"]
    label = "PASS" if speedup >= 100 else "FAIL"
    print(f"\n{label}  frame speed gate (advisory, not blocking): frame is {speedup:.1f}x faster than dense at N=6, l=8 (target 100x)")
    if speedup < 100:
        warnings.warn(f"advisory speed gate: frame backend only {speedup:.1f}x faster than dense", stacklevel=1)


def test_file_independence(verdict):
    start = time.perf_counter()
    worst = max(lemma1_check(ProtocolFamily("qspir", n, f, ell)).max_distance for n, f, ell in GRID)
    verdict("file independence", worst <= 1e-12, f"max trace distance on grid {worst:.2e}", time.perf_counter() - start)


def test_entropy_bound(verdict):
    start = time.perf_counter()
    res = prop4_check(200, (0.25, 0.5, 0.75), rng=0)
    verdict(
        "reduced-state entropy bound",
        res.min_slack >= -1e-9 and res.cases == 600,
        f"{res.cases} cases, min slack {res.min_slack:.3e}",
        time.perf_counter() - start,
    )


def test_rate_upper_bound_not_reproduced(verdict):
    # The rate upper bound and capacity suprema are statements over all
    # protocol sequences. Only a consistency check is possible here: the
    # measured rate never exceeds the 2/N upper bound, with equality for even N.
    start = time.perf_counter()
    ok = True
    for n in range(2, 8):
        (t,) = run_qspir(ProtocolConfig.random(n, 2, 1, 1, rng=n))
        ok &= t.rate <= Fraction(2, n) and (n % 2 or t.rate == Fraction(2, n))
    verdict(
        "rate upper bound and capacity (not reproducible by experiment)",
        ok,
        "covered only by the file-independence and entropy-bound property checks; measured rates respect the 2/N bound for N=2..7",
        time.perf_counter() - start,
    )
