"""One test per acceptance criterion; each prints a PASS/FAIL line with its timing."""

import json
import random
import time
from contextlib import contextmanager
from math import comb, gcd

import numpy as np

from towercob.charnum import blowup_milnor, milnor_number, todd_genus
from towercob.cli import main
from towercob.cobordism import (a_closed_form, case_claim_residue, digit_case_select,
                                milnor_constant, verify_generator_degree)
from towercob.residues import (granville_batch, granville_residue, prime_factors, prime_power,
                               verify_lemma)
from towercob.varieties import (bounded_flag, br_variety, dual_hypersurface_milnor, h_variety,
                                product, projective_space, x_variety, y_variety)

from conftest import ACCEPTANCE_LINES


@contextmanager
def criterion(number: int, title: str, budget_s: float | None = None):
    """Record a PASS/FAIL line; a time budget, when given, is part of the criterion."""
    start = time.perf_counter()
    status, detail = "FAIL", ""
    try:
        yield
        elapsed = time.perf_counter() - start
        if budget_s is not None and elapsed > budget_s:
            detail = f" over budget {budget_s:g}s"
            raise AssertionError(f"criterion {number} took {elapsed:.2f}s > {budget_s}s")
        status = "PASS"
    except AssertionError as exc:
        detail = detail or f" {str(exc).splitlines()[0][:160]}"
        raise
    finally:
        elapsed = time.perf_counter() - start
        line = f"criterion {number:>2} {status} ({elapsed:6.2f}s) {title}{detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)


def test_criterion_01_bounded_flag_milnor():
    bounded_flag(1)  # numba compilation is not part of the measured work
    with criterion(1, "s_n(BF_n) = 1 + (-1)^(n+1), n <= 10", budget_s=5):
        bad = [(n, s) for n in range(1, 11)
               if (s := milnor_number(bounded_flag(n))) != 1 + (-1) ** (n + 1)]
        assert not bad, f"mismatches {bad}"


def test_criterion_02_x_milnor():
    with criterion(2, "s(X_ij) closed form, i+j <= 12", budget_s=30):
        bad = []
        for n in range(1, 13):
            for i in range(0, n // 2 + 1):
                j = n - i
                want = 0 if n % 2 == 0 else 2 * comb(n, i)
                got = milnor_number(x_variety(i, j))
                if got != want:
                    bad.append((i, j, got, want))
        assert not bad, f"mismatches {bad}"


def test_criterion_03_y_milnor():
    with criterion(3, "s(Y_ij) partial binomial sums, 2 <= i <= j, i+j <= 12"):
        bad = []
        for n in range(4, 13):
            for i in range(2, n // 2 + 1):
                j = n - i
                want = sum(comb(k, j) for k in range(j, n + 1))
                got = milnor_number(y_variety(i, j))
                if got != want:
                    bad.append((i, j, got, want))
        diag = []
        for j in range(1, 12):
            got, stated = milnor_number(y_variety(1, j)), j + 1 + (-1) ** (j + 1)
            diag.append((j, got, stated))
        mism = [d for d in diag if d[1] != d[2]]
        note = f"i=1 diagnostic: {len(diag) - len(mism)}/{len(diag)} agree; mismatches {mism}"
        ACCEPTANCE_LINES.append(f"             {note}")
        print(note)
        assert not bad, f"mismatches {bad}"


def test_criterion_04_a_values():
    with criterion(4, "blowup_milnor(X_ij, Y_ij) = a_ij, 2 <= i <= j, i+j <= 12"):
        bad = []
        for n in range(4, 13):
            for i in range(2, n // 2 + 1):
                j = n - i
                want = (-1) ** (n + 1) * comb(n, j) - comb(n, j + 1)
                got = blowup_milnor(x_variety(i, j), y_variety(i, j))
                if got != want or a_closed_form(i, j) != want:
                    bad.append((i, j, got, want))
        assert not bad, f"mismatches {bad}"


def test_criterion_05_generator_gcd():
    with criterion(5, "gcd of degree-n a-values = m_n, 2 <= n <= 30; witness pairs", budget_s=5):
        bad = []
        for n in range(2, 31):
            g = 0
            for i in range(0, n // 2 + 1):
                g = gcd(g, a_closed_form(i, n - i))
            pp = prime_power(n + 1)
            want = pp[0] if pp else 1
            if g != want or milnor_constant(n) != want or verify_generator_degree(n).verdict != "pass":
                bad.append((n, g, want))
        for n1 in (9, 25, 27):
            p, s = prime_power(n1)
            n = n1 - 1
            i, j = p ** (s - 1), p ** s - p ** (s - 1) - 1
            pair = gcd(a_closed_form(0, n), a_closed_form(i, j))
            if pair != p:
                bad.append(("pair", n1, pair))
        assert not bad, f"mismatches {bad}"


def test_criterion_06_digit_cases():
    with criterion(6, "digit-case witnesses for composite n+1 <= 31"):
        bad, count = [], 0
        for n1 in range(4, 32):
            if prime_power(n1):
                continue
            n = n1 - 1
            for q in prime_factors(n1):
                case, j = digit_case_select(n, q)
                a = a_closed_form(n - j, j)
                count += 1
                if a % q == 0 or a % q != case_claim_residue(n, q, case, j):
                    bad.append((n, q, case, j, a % q))
        assert count > 0 and not bad, f"mismatches {bad}"


def test_criterion_07_congruences():
    with criterion(7, "congruence lemmas mod p^2", budget_s=10):
        primes = [2, 3, 5, 7, 11, 13]
        recs = []
        for p in primes:
            recs += [verify_lemma("eq12", p, r=r) for r in range(p)]
            recs += [verify_lemma("ressq", p)]
            if p > 2:
                recs += [verify_lemma("tech", p, a=a) for a in range(1, p)]
                recs += [verify_lemma("tech4", p)]
            for s in (2, 3):
                if p ** s > 2200:
                    continue
                recs.append(verify_lemma("pmain", p, s=s))
                # the two binomial lemmas are stated inside the odd-prime branch
                if p > 2:
                    recs += [verify_lemma("lm32", p, s=s), verify_lemma("lm31", p, s=s)]
        assert sum(comb(k, 5) for k in range(5, 9)) == 84 and 84 % 9 == 3
        assert verify_lemma("pmain", 3, s=2).lhs == 3
        # p = 2 rows of odd-only statements are labelled unsupported; judge them on the congruence itself
        bad = [(r.lemma, r.params, r.lhs, r.rhs, r.verdict) for r in recs
               if not (r.verdict == "pass" or (r.verdict == "unsupported" and r.holds))]
        assert not bad, f"{len(bad)} of {len(recs)} instances not pass: {bad}"


def test_criterion_08_granville():
    granville_batch(np.array([5]), np.array([2]), 3, 2)
    with criterion(8, "Granville residues vs big-integer binomials", budget_s=60):
        bad = []
        rows = [(n, m) for n in range(301) for m in range(n + 1)]
        big = {nm: comb(*nm) for nm in rows}
        for p in (2, 3, 5, 7):
            for q in (1, 2, 3):
                mod = p ** q
                for n, m in rows:
                    if granville_residue(n, m, p, q).value != big[(n, m)] % mod:
                        bad.append((n, m, p, q))
        rng = random.Random(20240601)
        for _ in range(10_000):
            n = rng.randint(0, 2000)
            m = rng.randint(0, n)
            p, q = rng.choice((2, 3, 5, 7)), rng.randint(1, 3)
            if granville_residue(n, m, p, q).value != comb(n, m) % p ** q:
                bad.append((n, m, p, q))
        nn = np.array([rng.randint(0, 2000) for _ in range(2000)], np.int64)
        mm = np.array([rng.randint(0, int(x)) for x in nn], np.int64)
        for p in (2, 3, 5, 7):
            for q in (1, 2, 3):
                got = granville_batch(nn, mm, p, q)
                for a, b, g in zip(nn, mm, got):
                    if int(g) != comb(int(a), int(b)) % p ** q:
                        bad.append(("batch", int(a), int(b), p, q))
        assert not bad, f"{len(bad)} mismatches, first {bad[:5]}"


def test_criterion_09_todd():
    with criterion(9, "Todd genus 1 on CP^n, BF_n, X_ij, BR_ij"):
        vs = [projective_space(n) for n in range(1, 5)]
        vs += [bounded_flag(n) for n in range(1, 7)]
        vs += [x_variety(i, n - i) for n in range(1, 9) for i in range(0, n // 2 + 1)]
        vs += [br_variety(i, n - i) for n in range(2, 8) for i in range(1, n // 2 + 1)]
        bad = [(v.name, t) for v in vs if (t := todd_genus(v)) != 1]
        assert not bad, f"mismatches {bad}"


def test_criterion_10_dualization():
    with criterion(10, "dual hypersurfaces: CP products = H_ij, BF products = -binom(i+j, i)"):
        bad = []
        for i in range(1, 5):
            for j in range(i, 5):
                C = product(projective_space(i), projective_space(j))
                got = dual_hypersurface_milnor(C, C.gen("y") + C.gen("y'"))
                if got != milnor_number(h_variety(i, j)):
                    bad.append(("CP", i, j, got))
        for i in range(1, 6):
            for j in range(i, 6):
                B = product(bounded_flag(i), bounded_flag(j))
                got = dual_hypersurface_milnor(B, B.gen(f"t{i}") + B.gen(f"t{j}'"))
                if got != -comb(i + j, i):
                    bad.append(("BF", i, j, got, -comb(i + j, i)))
        assert not bad, f"mismatches (kind, i, j, got, stated) {bad}"


def test_criterion_11_property_suites(tmp_path):
    import test_cli
    import test_dsl
    import test_ring

    with criterion(11, "property suites, >= 500 cases each"):
        for fn in (test_ring.test_ring_axioms, test_ring.test_invert_unit_property,
                   test_ring.test_normal_form_idempotent,
                   test_ring.test_integrate_multiplicative_over_products,
                   test_dsl.test_parse_print_round_trip,
                   test_cli.test_report_serialization_is_deterministic):
            assert fn.hypothesis.inner_test is not None
            fn()
        outputs = []
        for run in range(500):
            out = tmp_path / f"r{run}.json"
            argv = ["verify-congruences", "--primes", "3,5", "--max-s", "2", "--no-timing",
                    "--jobs", str(1 + run % 4), "--out", str(out)]
            assert main(argv) == 0
            outputs.append(out.read_bytes())
        assert len(set(outputs)) == 1
        json.loads(outputs[0])
