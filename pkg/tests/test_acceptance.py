"""One test per acceptance criterion; each prints a PASS/FAIL line."""

from __future__ import annotations

import math
import random
import time

import pytest

from conftest import ACCEPTANCE
from fjmult.cyclic import Family
from fjmult.descent import sp_descent_table, verify_u_descent
from fjmult.engine import bound_audit, hs_bound, intertwine, multiplicity_general, multiplicity_regular
from fjmult.oracle import build_group, classical_dl_table
from fjmult.oracle.pairing import pairing_matrix
from fjmult.oracle.realize import SUPPORTED
from fjmult.oracle.verify import dual_weil_check, engine_vs_oracle, jacobi_crosscheck, psi_independence, weil_check
from fjmult.tori import (
    GroupSpec,
    TorusCharacter,
    TorusDatum,
    enumerate_torus_classes,
    is_regular_character,
    weyl_act,
    weyl_group,
    weyl_order_formula,
)

# every engine-vs-oracle record produced here, keyed by group label
RECORDS: dict[str, tuple[int, list[dict]]] = {}


@pytest.fixture
def verdict(request, capsys):
    def record(n: int, ok: bool, detail: str) -> None:
        request.config.stash[ACCEPTANCE][n] = (ok, detail)
        with capsys.disabled():
            print(f"\n[criterion {n}] {'PASS' if ok else 'FAIL'}: {detail}")

    return record


def _oracle_run(spec: GroupSpec) -> dict:
    rep = engine_vs_oracle(spec, keep_records=True)
    RECORDS[spec.label()] = (spec, rep["records"])
    return rep


def test_criterion_01_gl1_closed_form(verdict):
    ok, details = True, []
    for q in (3, 5, 7):
        T = TorusDatum.make(GroupSpec(Family.GL, 1, q), {1: 1})
        start = time.perf_counter()
        engine = {
            (c, e): multiplicity_general(T, TorusCharacter(T, (c,)), T, TorusCharacter(T, (e,))).total
            for c in range(q - 1)
            for e in range(q - 1)
        }
        elapsed = time.perf_counter() - start
        closed = {(c, e): 1 + (e == (c + (q - 1) // 2) % (q - 1)) for c, e in engine}
        G = build_group(GroupSpec(Family.GL, 1, q))
        table = classical_dl_table(G)
        fs = [table.get(T, (c,)) for c in range(q - 1)]
        brute = pairing_matrix(G, fs, fs, G.weil(1))
        agree = engine == closed and all(engine[(c, e)] == brute[c, e] for c, e in engine)
        ok &= agree and elapsed < 1.0 and len(engine) == (q - 1) ** 2
        details.append(f"q={q}: {len(engine)} pairs, {elapsed * 1e3:.1f} ms")
    verdict(1, ok, "; ".join(details))
    assert ok


@pytest.mark.parametrize("q", [3, 5, 7])
def test_criterion_02_sp2(verdict, q, request):
    start = time.perf_counter()
    rep = _oracle_run(GroupSpec(Family.SP, 1, q))
    elapsed = time.perf_counter() - start
    ok = rep["ok"] and elapsed < 60 and rep["pairs"] == (2 * q) ** 2
    prev = request.config.stash[ACCEPTANCE].get(2, (True, ""))
    detail = (prev[1] + "; " if prev[1] else "") + f"Sp2(F_{q}): {rep['pairs']} pairs, {len(rep['mismatches'])} mismatches, {elapsed:.1f} s"
    verdict(2, prev[0] and ok, detail)
    assert ok


def test_criterion_03_gl2_u1_u2(verdict):
    start = time.perf_counter()
    groups = [GroupSpec(Family.GL, 2, 3), GroupSpec(Family.GL, 2, 5), GroupSpec(Family.U, 1, 3), GroupSpec(Family.U, 1, 5), GroupSpec(Family.U, 2, 3)]
    reps = [_oracle_run(g) for g in groups]
    elapsed = time.perf_counter() - start
    elliptic = all(not r["missing_tori"] for r in reps)
    ok = all(r["ok"] for r in reps) and elliptic and elapsed < 300
    detail = ", ".join(f"{r['group']} {r['pairs']} pairs/{len(r['mismatches'])} bad" for r in reps)
    verdict(3, ok, f"{detail}; {elapsed:.1f} s")
    assert ok


def test_criterion_04_u2_anisotropic(verdict):
    T = TorusDatum.make(GroupSpec(Family.U, 2, 3), {}, {1: 2})
    regular = [TorusCharacter(T, (a, b)) for a in range(4) for b in range(4)]
    regular = [c for c in regular if is_regular_character(T, c)]
    bad, counts = 0, {0: 0, 1: 0}
    for chi in regular:
        for eta in regular:
            m = multiplicity_general(T, chi, T, eta).total
            tw = intertwine(T, chi, T, eta)
            if m not in (0, 1) or (m == 0) != tw or multiplicity_regular(T, chi, T, eta) != m:
                bad += 1
            else:
                counts[m] += 1
    ok = bad == 0 and len(regular) > 0
    verdict(4, ok, f"{len(regular) ** 2} regular pairs, m=0: {counts[0]}, m=1: {counts[1]}, violations {bad}")
    assert ok


def test_criterion_05_sp4(verdict):
    start = time.perf_counter()
    rep = _oracle_run(GroupSpec(Family.SP, 2, 3))
    elapsed = time.perf_counter() - start
    ok = rep["ok"] and elapsed < 600
    verdict(5, ok, f"{rep['pairs']} Levi-reachable pairs, {len(rep['mismatches'])} mismatches, "
                   f"unreachable tori {rep['missing_tori']}, {elapsed:.1f} s including table construction")
    assert ok


def test_criterion_06_u_descent(verdict):
    ok, details = True, []
    for n in (2, 3):
        for q in (3, 5):
            rep = verify_u_descent(n, q)
            vals = {(m["m_j0"], m["m_j1"], m["m_Ta"], m["m_pi_ss"]) for m in rep["matching"]}
            good = rep["ok"] and vals == {(-1, 2, 1, 1)} and len(rep["matching"]) == q + 1
            ok &= good
            details.append(f"n={n},q={q}: part1 {rep['part1']['probes']}x{rep['part1']['values']}, "
                           f"matching {sorted(vals)}, zero {rep['zero']['probes']}x{rep['zero']['values']}")
    verdict(6, ok, "; ".join(details))
    assert ok


def test_criterion_07_sp_descent_and_jacobi(verdict):
    ok, details = True, []
    for q in (3, 5):
        rep = sp_descent_table(2, q)
        m = rep["matching"][0]
        good = rep["ok"] and rep["part1"]["values"] == [1] and m["m_pi_ss"] == 1
        ok &= good
        details.append(f"n=2,q={q}: part (1) {rep['part1']['probes']}x{rep['part1']['values']}, matching pi_ss {m['m_pi_ss']}")
    jac = jacobi_crosscheck(3)
    levels = {(r["jacobi"], r["engine"], r["klingen_pairing"], r["level_two"]) for r in jac["rows"]}
    ok &= jac["ok"]
    details.append(f"Sp4(F_3) Jacobi: {len(jac['rows'])} probes, (l=1 brute, engine, Klingen pairing, l=2 brute) = {sorted(levels)}")
    verdict(7, ok, "; ".join(details))
    assert ok


def test_criterion_08_weil(verdict):
    ok, parts = True, []
    for fam, n, q in sorted(SUPPORTED, key=lambda x: (x[0].value, x[1], x[2])):
        rep = weil_check(GroupSpec(fam, n, q))
        ok &= rep["ok"]
        parts.append(f"{rep['group']} {rep['torus_elements']}/{rep['elements']}"
                     + ("" if rep["ok"] else " FAIL"))
    verdict(8, ok, "torus elements/all elements: " + ", ".join(parts))
    assert ok


def test_criterion_09_properties(verdict):
    # Weyl orders against the closed form
    tori = 0
    njs = True
    for fam in Family:
        for n in range(1, 7):
            for q in (3, 5, 7):
                for T in enumerate_torus_classes(GroupSpec(fam, n, q)):
                    tori += 1
                    njs &= weyl_group(T).order == weyl_order_formula(T)
    # 200 random Weyl twists on Sp4(F_3), U3(F_3) and GL3(F_5) pairs
    rng = random.Random(0)
    twist_bad = 0
    for _ in range(200):
        G = rng.choice([GroupSpec(Family.SP, 2, 3), GroupSpec(Family.U, 3, 3), GroupSpec(Family.GL, 3, 5)])
        cls = enumerate_torus_classes(G)
        T, S = rng.choice(cls), rng.choice(cls)
        chi = TorusCharacter(T, tuple(rng.randrange(m) for m in T.moduli))
        eta = TorusCharacter(S, tuple(rng.randrange(m) for m in S.moduli))
        m = multiplicity_general(T, chi, S, eta).total
        chi2 = weyl_act(weyl_group(T).random(rng), chi)
        eta2 = weyl_act(weyl_group(S).random(rng), eta)
        twist_bad += multiplicity_general(T, chi2, S, eta2).total != m
    # regular/general agreement and integrality over every pair encountered
    seen, regular, reg_bad, non_int = 0, 0, 0, 0
    for G in [GroupSpec(Family.SP, n, q) for n in (1, 2) for q in (3, 5, 7)] + [
        GroupSpec(f, n, q) for f in (Family.U, Family.GL) for n in (1, 2, 3) for q in (3, 5)
    ]:
        cls = enumerate_torus_classes(G)
        for T in cls:
            chis = _some_characters(T, 6)
            for S in cls:
                for chi in chis:
                    for eta in _some_characters(S, 6):
                        rep = multiplicity_general(T, chi, S, eta)
                        seen += 1
                        non_int += not isinstance(rep.total, int)
                        if is_regular_character(T, chi) and is_regular_character(S, eta):
                            regular += 1
                            reg_bad += multiplicity_regular(T, chi, S, eta) != rep.total
    psi = psi_independence(GroupSpec(Family.SP, 1, 5))
    dual = dual_weil_check(GroupSpec(Family.SP, 1, 5))
    ok = njs and twist_bad == 0 and reg_bad == 0 and non_int == 0 and psi["ok"] and dual["ok"]
    verdict(9, ok, f"Weyl-order formula on {tori} tori; 200 twists, {twist_bad} changed; {regular} regular pairs of {seen}, "
                   f"{reg_bad} disagreements; non-integral {non_int}; psi-independence {psi['ok']}, duality {dual['ok']}")
    assert ok


def _some_characters(T: TorusDatum, limit: int) -> list[TorusCharacter]:
    size = math.prod(T.moduli)
    rng = random.Random(size)
    picks = {(0,) * len(T.moduli)}
    if size <= limit:
        picks = {tuple(v) for v in _all_values(T.moduli)}
    while len(picks) < min(limit, size):
        picks.add(tuple(rng.randrange(m) for m in T.moduli))
    return [TorusCharacter(T, v) for v in sorted(picks)]


def _all_values(moduli):
    if not moduli:
        yield ()
        return
    for rest in _all_values(moduli[1:]):
        for v in range(moduli[0]):
            yield (v,) + rest


@pytest.mark.xfail(
    strict=True,
    reason="the 2^n n! bound is violated by non-regular symplectic pairs (Sp2(F_3): 3 > 2); "
    "engine and brute force agree on these values; see the decisions ledger",
)
def test_criterion_10_bound_audit(verdict):
    if not RECORDS:
        for spec in (GroupSpec(Family.SP, 1, 3), GroupSpec(Family.GL, 2, 3), GroupSpec(Family.U, 2, 3)):
            _oracle_run(spec)
    per_family = {}
    all_records = []
    for label, (spec, records) in sorted(RECORDS.items()):
        recs = [{"n": spec.n, "m": r["oracle"], "pair": [label, r["T"], r["chi"], r["S"], r["eta"]]} for r in records]
        all_records += recs
        a = bound_audit(recs)
        fam = per_family.setdefault(spec.family.value, [True, 0])
        fam[0] &= a.ok
        fam[1] = max(fam[1], a.max_abs)
    audit = bound_audit(all_records)
    hs = {n: hs_bound(n) for n in (1, 2, 3)}
    fam_text = ", ".join(f"{f}: {'within' if v[0] else 'exceeds'} (max {v[1]})" for f, v in sorted(per_family.items()))
    worst = max(audit.violations, key=lambda v: v["m"] / v["bound"], default=None)
    detail = (f"{audit.checked} pairs, max |m| {audit.max_abs}, {len(audit.violations)} violations; {fam_text}; "
              f"worst {worst['pair'][0] + ' m=' + str(worst['m']) + ' > ' + str(worst['bound']) if worst else 'none'}; "
              f"hs_bound {hs}")
    verdict(10, audit.ok, detail)
    assert hs[2] == 16
    assert audit.ok
