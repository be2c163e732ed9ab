"""Acceptance criteria, each at its stated sample size and time limit.
Every test prints one PASS/FAIL line (visible with or without ``-s``)."""

import random
import time

import pytest

from modalcut import parse, show
from modalcut.analysis import (
    check_confluence, check_embedding, check_simulation, check_subject_reduction,
    eager_beta, gen_beta_redex, gen_typed, reduction_graph, sigma_pi_overlap,
)
from modalcut.calculi import VC, STLC, get_calculus
from modalcut.cli import lafont_report, run
from modalcut.syntax.terms import Lam, Var, alpha_eq, erase
from modalcut.translate import cm, cm_aux, cm_sequent, mtr_sequent

from conftest import corpus


@pytest.fixture
def report(capsys):
    def emit(number: int, title: str, ok: bool, detail: str, elapsed: float, limit: float | None):
        within = limit is None or elapsed < limit
        verdict = "PASS" if ok and within else "FAIL"
        budget = f" (limit {limit:g}s)" if limit is not None else ""
        with capsys.disabled():
            print(f"\n[criterion {number}] {verdict}: {title}: {detail}; {elapsed:.1f}s{budget}")
        assert ok, detail
        assert within, f"took {elapsed:.1f}s, limit {limit}s"
    return emit


def test_criterion_1_lafont(report):
    t0 = time.perf_counter()
    results, as_expected = lafont_report()
    code, out = run(["demo", "lafont"])
    elapsed = time.perf_counter() - t0
    full = results[0][1]
    full_nfs = sorted(show(t.final) for t in full.witness)
    singles = [len(v.witness) == 1 and v.kind == "confluent" for _, v in results[1:]]
    ok = (full.kind == "non-confluent" and full_nfs == ["< y | @b >", "< z | @b >"]
          and full.stats["exhausted"] is False and all(singles) and len(singles) == 4
          and as_expected and code == 0)
    detail = "full: " + ", ".join(full_nfs) + "; " + "; ".join(
        f"{label}: {show(v.witness[0].final)}" for label, v in results[1:])
    report(1, "Lafont non-confluence", ok, detail, elapsed, 1.0)


def test_criterion_2_sigma_pi_non_overlap(report):
    t0 = time.perf_counter()
    calc = get_calculus("lmmt-vn")
    violations = nodes = 0
    for seed in range(1000):
        s = gen_typed("lmmt-vn", 1 + seed % 10, seed)
        g = reduction_graph(calc, s.subject, 10_000)
        nodes += len(g.nodes)
        violations += sum(bool(sigma_pi_overlap(calc, n)) for n in g.nodes)
    elapsed = time.perf_counter() - t0
    report(2, "sigma/pi non-overlap", violations == 0,
           f"1000 expressions, {nodes} graph nodes, {violations} violations", elapsed, 60.0)


def test_criterion_3_confluence(report):
    t0 = time.perf_counter()
    parts, ok = [], True
    for name in ("vc", "lmmt-vn"):
        calc = get_calculus(name)
        kinds = {"confluent": 0, "non-confluent": 0, "inconclusive": 0}
        for seed in range(500):
            kinds[check_confluence(calc, gen_typed(name, 8, seed).subject, 10_000).kind] += 1
        ok &= kinds["non-confluent"] == 0 and kinds["inconclusive"] < 0.02 * 500
        parts.append(f"{name}: {kinds['confluent']} confluent, {kinds['non-confluent']} "
                     f"non-confluent, {kinds['inconclusive']} inconclusive")
    report(3, "confluence on typed terms", ok, "; ".join(parts), time.perf_counter() - t0, 600.0)


def test_criterion_4_subject_reduction(report):
    t0 = time.perf_counter()
    parts, failures = [], 0
    for name in ("lmmt", "lmmt-vn", "lm-M", "vc", "ivc"):
        calc = get_calculus(name)
        bad = edges = 0
        for seed in range(500):
            v = check_subject_reduction(calc, gen_typed(name, 8, seed), 10_000)
            bad += not v.ok
            edges += v.stats["edges"]
        failures += bad
        parts.append(f"{name}: {bad} failures over {edges} edges")
    report(4, "subject reduction", failures == 0, "; ".join(parts),
           time.perf_counter() - t0, 600.0)


def test_criterion_5_strict_simulation(report):
    t0 = time.perf_counter()
    parts, ok = [], True
    for source, translation in (("vc", "cm"), ("lmmt-vn", "mtr"), ("lmmt-vn", "cps")):
        calc = get_calculus(source)
        done = good = coterm = 0
        seed = 0
        while done < 500:
            s = gen_typed(source, 8, seed)
            seed += 1
            rs = calc.redexes(s.subject)
            if not rs:
                continue
            r = random.Random(seed).choice(rs)
            done += 1
            good += check_simulation(calc, s.subject, r, translation, fuel=50).ok
            coterm += s.kind == "coterm"
        ok &= good == done
        extra = f", {coterm} co-term steps" if source == "lmmt-vn" else ""
        parts.append(f"{translation} on {source}: {good}/{done} simulation-ok{extra}")
    report(5, "strict simulation", ok, "; ".join(parts), time.perf_counter() - t0, 600.0)


def test_criterion_6_eager_beta(report):
    t0 = time.perf_counter()
    parts, ok = [], True
    for form in ("value", "computation"):
        good = 0
        for seed in range(100):
            trace, expected = eager_beta(gen_beta_redex(form, seed=seed).subject)
            good += (trace.rules == ["beta", "sigma", "eta-mu"] and len(trace) == 3
                     and alpha_eq(erase(trace.final), erase(expected)))
        ok &= good == 100
        parts.append(f"{form} form: {good}/100")
    report(6, "derived eager beta", ok, "; ".join(parts), time.perf_counter() - t0, None)


def _vc_sample():
    return [gen_typed("vc", 8, seed) for seed in range(300)]


def test_criterion_7_typing_admissibility(report):
    t0 = time.perf_counter()
    mtr_ok = mtr_total = 0
    for seed in range(300):
        s = gen_typed("lmmt-vn", 8, seed)
        for as_value in (False, True):
            mtr_total += 1
            mtr_ok += get_calculus("vc").typable(mtr_sequent(s, as_value=as_value))
    cm_ok = cm_total = 0
    for s in _vc_sample():
        auxes = (False, True) if VC().classify(s.subject) == "computation" else (False,)
        for aux in auxes:
            image = cm_sequent(s, aux=aux)
            cm_total += 1
            cm_ok += STLC().typable(image) and (s.kind != "command" or str(image.type) == "Bot")
    ok = mtr_ok == mtr_total and cm_ok == cm_total
    report(7, "typing admissibility", ok,
           f"mtr {mtr_ok}/{mtr_total}; cm/cm_aux {cm_ok}/{cm_total}",
           time.perf_counter() - t0, None)


def test_criterion_8_cm_values(report):
    t0 = time.perf_counter()
    good = total = 0
    for s in _vc_sample():
        cls = VC().classify(s.subject)
        if cls == "command":
            continue
        image = cm(s.subject).result
        checks = [isinstance(image, (Var, Lam))]
        if cls == "computation":
            checks += [isinstance(image, Lam), isinstance(cm_aux(s.subject).result, (Var, Lam))]
        total += len(checks)
        good += sum(checks)
    report(8, "value-ness of cm images", good == total, f"{good}/{total} checks",
           time.perf_counter() - t0, None)


def test_criterion_9_round_trip(report):
    t0 = time.perf_counter()
    entries = corpus()
    good = 0
    for calc, text in entries:
        e = parse(text, calc)
        good += alpha_eq(parse(show(e), calc), e)
    calculi = {calc for calc, _ in entries}
    ok = good == len(entries) and len(entries) >= 60 and len(calculi) == 6
    report(9, "parse/print round trip", ok,
           f"{good}/{len(entries)} expressions across {len(calculi)} calculi",
           time.perf_counter() - t0, None)


def test_criterion_10_embedding_conservativity(report):
    t0 = time.perf_counter()
    parts, ok = [], True
    for fragment in ("cbn", "cbv"):
        good = sum(check_embedding(gen_typed("lmmt", 8, seed).subject, fragment)[0]
                   for seed in range(200))
        ok &= good == 200
        parts.append(f"{fragment}: {good}/200")
    report(10, "embedding conservativity", ok, "; ".join(parts), time.perf_counter() - t0, None)
