"""Command line: every verb reads JSON or flags and writes one sorted JSON document.

Exit status is 0 when every asserted check passes, 1 when a check fails
and 2 on a structured error.
"""

from __future__ import annotations

import json
import math
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import click

from . import __version__
from .cyclic import as_family
from .descent import distinguished_parameter, sp_descent_table, verify_u_descent
from .engine import bound_audit, hs_bound, intertwine, multiplicity_general, multiplicity_regular
from .errors import FJError, UsageError
from .schemas import JOB, PAIR_JOB, validate
from .tori import (
    GroupSpec,
    TorusCharacter,
    TorusDatum,
    all_characters,
    enumerate_torus_classes,
    is_regular_character,
    torus_rank,
    weyl_act,
    weyl_group,
    weyl_order_formula,
)

# -- operations: each returns {"input", "result", "checks", "ok"} ------------


def _finish(inputs: dict, result, checks: dict) -> dict:
    return {"input": inputs, "result": result, "checks": checks, "ok": all(checks.values())}


def _group(params: dict) -> GroupSpec:
    missing = [k for k in ("family", "n", "q") if params.get(k) is None]
    if missing:
        raise UsageError(f"missing group parameter(s): {', '.join(missing)}")
    return GroupSpec(as_family(params["family"]), int(params["n"]), int(params["q"]))


def op_tori(params: dict) -> dict:
    G = _group(params)
    rows, orders_ok = [], True
    for T in enumerate_torus_classes(G):
        w = weyl_group(T)
        orders_ok &= w.order == weyl_order_formula(T)
        rows.append({"torus": T.to_json(), "label": T.describe(), "rank": torus_rank(T), "weyl_order": w.order})
    inputs = {"family": G.family.value, "n": G.n, "q": G.q}
    return _finish(inputs, {"count": len(rows), "tori": rows}, {"weyl_order": orders_ok})


def _pair(params: dict):
    validate(params, PAIR_JOB)
    T, S = TorusDatum.from_json(params["T"]), TorusDatum.from_json(params["S"])
    chi = TorusCharacter.from_json(T, params["chi"])
    eta = TorusCharacter.from_json(S, params["eta"])
    inputs = {"T": T.to_json(), "chi": chi.to_json(), "S": S.to_json(), "eta": eta.to_json()}
    return T, chi, S, eta, inputs


def op_mult(params: dict) -> dict:
    T, chi, S, eta, inputs = _pair({k: v for k, v in params.items() if k != "verb"})
    method = params.get("method", "factored")
    inputs["method"] = method
    report = multiplicity_general(T, chi, S, eta, method)
    checks = {"integral": True}
    if is_regular_character(T, chi) and is_regular_character(S, eta):
        checks["regular_agreement"] = multiplicity_regular(T, chi, S, eta) == report.total
    return _finish(inputs, report.to_json(), checks)


def op_regular(params: dict) -> dict:
    T, chi, S, eta, inputs = _pair({k: v for k, v in params.items() if k != "verb"})
    regular = multiplicity_regular(T, chi, S, eta)
    general = multiplicity_general(T, chi, S, eta).total
    return _finish(inputs, {"total": regular, "general_total": general}, {"regular_agreement": regular == general})


def op_intertwine(params: dict) -> dict:
    T, chi, S, eta, inputs = _pair({k: v for k, v in params.items() if k != "verb"})
    result = {"intertwine": intertwine(T, chi, S, eta)}
    checks = {}
    if is_regular_character(T, chi) and is_regular_character(S, eta):
        m = multiplicity_general(T, chi, S, eta).total
        result["total"] = m
        checks["zero_iff_intertwine"] = (m == 0) == result["intertwine"] and m in (0, 1)
    return _finish(inputs, result, checks)


def op_descent(params: dict) -> dict:
    mode = params.get("mode", "verify-u")
    if mode == "distinguish":
        return op_distinguish(params)
    n, q = int(params["n"]), int(params["q"])
    s = params.get("s")
    samples, seed = int(params.get("samples", 12)), int(params.get("seed", 0))
    inputs = {"mode": mode, "n": n, "q": q, "s": s, "samples": samples, "seed": seed}
    if mode == "verify-u":
        res = verify_u_descent(n, q, s, samples, seed)
    elif mode == "verify-sp":
        res = sp_descent_table(n, q, s, samples, seed)
    else:
        raise UsageError(f"unknown descent mode {mode!r}")
    checks = {"part1": res["part1"]["ok"], "zero": res["zero"]["ok"], "all": res["ok"]}
    if mode == "verify-sp" and params.get("jacobi"):
        from .oracle.verify import jacobi_crosscheck

        jac = jacobi_crosscheck(q)
        res["jacobi"] = jac
        checks["jacobi"] = jac["ok"]
    return _finish(inputs, res, checks)


def op_distinguish(params: dict) -> dict:
    m, s, q = int(params["m"]), int(params["s"]), int(params["q"])
    ramified = bool(params.get("ramified", True))
    c = distinguished_parameter(m, ramified, s, q)
    inputs = {"m": m, "s": s, "q": q, "ramified": ramified}
    return _finish(inputs, {"c_s": c}, {"sign": c in (1, -1)})


def _oracle_case(args) -> dict:
    from .oracle.verify import verify_case

    spec, scale = args
    return verify_case(spec, scale)


def op_oracle_verify(params: dict, jobs: int = 1) -> dict:
    from .oracle.verify import ORACLE_GROUPS, jacobi_crosscheck

    scale = int(params.get("scale", 1))
    cases = [
        g for g in ORACLE_GROUPS
        if (params.get("family") is None or g.family is as_family(params["family"]))
        and (params.get("n") is None or g.n == int(params["n"]))
        and (params.get("q") is None or g.q == int(params["q"]))
    ]
    if not cases:
        raise UsageError("no supported oracle group matches the filter")
    results = _map(_oracle_case, [(g, scale) for g in cases], jobs)
    checks = {r["group"]: r["ok"] for r in results}
    result = {"cases": results}
    if params.get("jacobi"):
        jac = jacobi_crosscheck(3)
        result["jacobi"] = jac
        checks["jacobi"] = jac["ok"]
    inputs = {k: params.get(k) for k in ("family", "n", "q")} | {"scale": scale, "jacobi": bool(params.get("jacobi"))}
    return _finish(inputs, result, checks)


def _sample(T: TorusDatum, limit: int, rng: random.Random) -> list[tuple[int, ...]]:
    size = 1
    for m in T.moduli:
        size *= m
    if size <= limit:
        return [c.values for c in all_characters(T)]
    picks = set()
    while len(picks) < limit:
        picks.add(tuple(rng.randrange(m) for m in T.moduli))
    return sorted(picks)


def _audit_row(args) -> list[dict]:
    T_json, chis, others = args
    T = TorusDatum.from_json(T_json)
    out = []
    for v in chis:
        chi = TorusCharacter(T, v)
        for S_json, etas in others:
            S = TorusDatum.from_json(S_json)
            for w in etas:
                eta = TorusCharacter(S, w)
                m = multiplicity_general(T, chi, S, eta).total
                rec = {"T": T.describe(), "chi": list(v), "S": S.describe(), "eta": list(w), "m": m}
                if is_regular_character(T, chi) and is_regular_character(S, eta):
                    rec["regular"] = multiplicity_regular(T, chi, S, eta)
                out.append(rec)
    return out


def op_audit(params: dict, jobs: int = 1) -> dict:
    """Weyl orders, random Weyl twists, regular/general agreement and the size bound."""
    G = _group(params)
    seed = int(params.get("seed", 0))
    limit = int(params.get("characters", 4))
    twists = int(params.get("twists", 200))
    rng = random.Random(seed)
    tori = enumerate_torus_classes(G)
    weyl_ok = all(weyl_group(T).order == weyl_order_formula(T) for T in tori)
    sampled = [(T.to_json(), _sample(T, limit, rng)) for T in tori]
    rows = _map(_audit_row, [(Tj, chis, sampled) for Tj, chis in sampled], jobs)
    records = [r for row in rows for r in row]
    regular_bad = [r for r in records if "regular" in r and r["regular"] != r["m"]]
    # conjugation invariance under random Weyl elements on both sides
    twist_bad = 0
    by_label = {T.describe(): T for T in tori}
    for _ in range(twists if records else 0):
        r = records[rng.randrange(len(records))]
        T, S = by_label[r["T"]], by_label[r["S"]]
        chi = weyl_act(weyl_group(T).random(rng), TorusCharacter(T, r["chi"]))
        eta = weyl_act(weyl_group(S).random(rng), TorusCharacter(S, r["eta"]))
        twist_bad += multiplicity_general(T, chi, S, eta).total != r["m"]
    audit = bound_audit({"n": G.n, "m": r["m"], "pair": [r["T"], r["chi"], r["S"], r["eta"]]} for r in records)
    result = {
        "group": G.label(),
        "tori": len(tori),
        "pairs": len(records),
        "hs_bound": hs_bound(G.n),
        "audit_bound": 2**G.n * math.factorial(G.n),
        "bound_audit": audit.to_json(),
        "regular_pairs": sum("regular" in r for r in records),
        "regular_mismatches": regular_bad,
        "weyl_twists": twists,
        "twist_mismatches": twist_bad,
    }
    if params.get("records"):
        result["records"] = records
    checks = {
        "weyl_order": weyl_ok,
        "regular_agreement": not regular_bad,
        "conjugation_invariance": twist_bad == 0,
        "integrality": True,
        "bound": audit.ok,
    }
    inputs = {"family": G.family.value, "n": G.n, "q": G.q, "seed": seed, "characters": limit, "twists": twists}
    return _finish(inputs, result, checks)


def _map(fn, items: list, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


OPERATIONS = {
    "tori": op_tori,
    "mult": op_mult,
    "regular": op_regular,
    "intertwine": op_intertwine,
    "descent": op_descent,
    "distinguish": op_distinguish,
    "oracle-verify": op_oracle_verify,
    "audit": op_audit,
}


def run(job: dict, jobs: int = 1) -> dict:
    """Dispatch a JobSpec document to its operation."""
    validate(job, JOB)
    verb = job["verb"]
    params = {k: v for k, v in job.items() if k != "verb"}
    if verb in ("oracle-verify", "audit"):
        doc = OPERATIONS[verb](params, jobs)
    else:
        doc = OPERATIONS[verb](params)
    return {"verb": verb, **doc}


# -- click plumbing -------------------------------------------------------------


def render(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def _emit(doc: dict, output: str | None) -> None:
    text = render(doc)
    if output:
        Path(output).write_text(text)
    else:
        click.echo(text, nl=False)


def _load(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read JSON input {path!r}: {exc}") from exc


def _execute(verb: str, thunk, output: str | None, timing: bool) -> None:
    start = time.perf_counter()
    try:
        doc = thunk()
    except FJError as exc:
        _emit({"verb": verb, "ok": False, **{"error": exc.to_json()}}, output)
        sys.exit(2)
    if "verb" not in doc:
        doc = {"verb": verb, **doc}
    if timing:
        doc["wall_clock_s"] = round(time.perf_counter() - start, 3)
    _emit(doc, output)
    sys.exit(0 if doc["ok"] else 1)


def group_options(fn):
    fn = click.option("--q", type=int, default=None, help="Field size (odd prime power).")(fn)
    fn = click.option("--n", type=int, default=None, help="Rank.")(fn)
    fn = click.option("--family", type=click.Choice(["Sp", "U", "GL"], case_sensitive=False), default=None)(fn)
    return fn


def io_options(fn):
    fn = click.option("--timing", is_flag=True, help="Add wall-clock seconds (breaks byte stability).")(fn)
    fn = click.option("--output", "-o", type=click.Path(dir_okay=False), default=None, help="Write the report here.")(fn)
    fn = click.option("--input", "input_path", type=str, default=None, help="JSON payload file, or - for stdin.")(fn)
    return fn


def _flags(family, n, q) -> dict:
    return {k: v for k, v in (("family", family), ("n", n), ("q", q)) if v is not None}


@click.group()
@click.version_option(__version__)
def main():
    """Fourier-Jacobi multiplicities of Deligne-Lusztig characters."""


@main.command()
@group_options
@io_options
def tori(family, n, q, input_path, output, timing):
    """List the rational torus classes of a group."""

    def thunk():
        params = _load(input_path) | _flags(family, n, q)
        params.pop("verb", None)
        return op_tori(params)

    _execute("tori", thunk, output, timing)


def _pair_command(verb: str, op):
    @io_options
    def cmd(input_path, output, timing):
        def thunk():
            if input_path is None:
                raise UsageError(f"{verb} needs --input with T, chi, S and eta")
            return op(_load(input_path))

        _execute(verb, thunk, output, timing)

    cmd.__doc__ = {
        "mult": "Multiplicity of a DL pair with per-shape terms.",
        "regular": "Closed-form multiplicity of a regular pair.",
        "intertwine": "Intertwining test for anisotropic tori.",
    }[verb]
    return main.command(name=verb)(cmd)


_pair_command("mult", op_mult)
_pair_command("regular", op_regular)
_pair_command("intertwine", op_intertwine)


@main.group()
def descent():
    """Engine-side descent checks and the distinction parameter."""


def _descent_command(mode: str):
    @click.option("--n", type=int, required=True)
    @click.option("--q", type=int, required=True)
    @click.option("--s", type=int, default=None, help="Regular parameter (default: the smallest).")
    @click.option("--samples", type=int, default=12, show_default=True, help="Characters probed per torus.")
    @click.option("--seed", type=int, default=0, show_default=True)
    @io_options
    def cmd(n, q, s, samples, seed, input_path, output, timing, jacobi=False):
        def thunk():
            params = {"mode": mode, "n": n, "q": q, "s": s, "samples": samples, "seed": seed, "jacobi": jacobi}
            return op_descent(params)

        _execute("descent", thunk, output, timing)

    if mode == "verify-sp":
        cmd = click.option("--jacobi", is_flag=True, help="Add the Jacobi-group cross-check on Sp4(F_q).")(cmd)
    cmd.__doc__ = f"Run the {mode[7:].upper()} descent checks."
    return descent.command(name=mode)(cmd)


_descent_command("verify-u")
_descent_command("verify-sp")


def _distinguish_options(fn):
    fn = click.option("--ramified/--unramified", default=True, show_default=True)(fn)
    fn = click.option("--q", type=int, required=True)(fn)
    fn = click.option("--s", type=int, required=True)(fn)
    fn = click.option("--m", type=int, required=True)(fn)
    return io_options(fn)


@descent.command(name="distinguish")
@_distinguish_options
def descent_distinguish(m, s, q, ramified, input_path, output, timing):
    """Eigenvalue c_s of the distinguished depth-zero supercuspidal."""
    _execute("distinguish", lambda: op_distinguish({"m": m, "s": s, "q": q, "ramified": ramified}), output, timing)


@main.command(name="distinguish")
@_distinguish_options
def distinguish(m, s, q, ramified, input_path, output, timing):
    """Eigenvalue c_s of the distinguished depth-zero supercuspidal."""
    _execute("distinguish", lambda: op_distinguish({"m": m, "s": s, "q": q, "ramified": ramified}), output, timing)


@main.group()
def oracle():
    """Brute-force verification on small groups."""


@oracle.command(name="verify")
@group_options
@click.option("--scale", type=int, default=1, show_default=True, help="psi(x) = exp(2 pi i scale x / p).")
@click.option("--jacobi", is_flag=True, help="Add the Jacobi-group cross-check on Sp4(F_3).")
@click.option("--jobs", type=int, default=1, show_default=True)
@io_options
def oracle_verify(family, n, q, scale, jacobi, jobs, input_path, output, timing):
    """Engine against brute force on every supported group matching the filter."""
    params = _flags(family, n, q) | {"scale": scale, "jacobi": jacobi}
    _execute("oracle-verify", lambda: op_oracle_verify(params, jobs), output, timing)


@main.command()
@group_options
@click.option("--characters", type=int, default=4, show_default=True, help="Characters sampled per torus.")
@click.option("--twists", type=int, default=200, show_default=True, help="Random Weyl twists.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--records", is_flag=True, help="Include every pair in the report.")
@click.option("--jobs", type=int, default=1, show_default=True)
@io_options
def audit(family, n, q, characters, twists, seed, records, jobs, input_path, output, timing):
    """Weyl-order, invariance, regular-path and bound audits on sampled pairs."""

    def thunk():
        params = _load(input_path) | _flags(family, n, q)
        params.pop("verb", None)
        params |= {"characters": characters, "twists": twists, "seed": seed, "records": records}
        return op_audit(params, jobs)

    _execute("audit", thunk, output, timing)


@main.command(name="run")
@click.option("--input", "input_path", type=str, required=True, help="JobSpec JSON file, or - for stdin.")
@click.option("--output", "-o", type=click.Path(dir_okay=False), default=None)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--timing", is_flag=True)
def run_cmd(input_path, output, jobs, timing):
    """Run a JobSpec document {"verb": ..., payload}."""
    holder = {"verb": "run"}

    def thunk():
        job = _load(input_path)
        holder["verb"] = job.get("verb", "run") if isinstance(job, dict) else "run"
        return run(job, jobs)

    _execute(holder["verb"], thunk, output, timing)


@main.command()
@click.option("--out-dir", type=click.Path(file_okay=False), required=True)
@click.option("--figures", is_flag=True, help="Render PNG figures (needs matplotlib).")
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def report(out_dir, figures, jobs, seed):
    """Write an oracle comparison and size audits to report.json, optionally with figures."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    try:
        from .oracle.verify import engine_vs_oracle

        spec = GroupSpec("Sp", 1, 5)
        pairs = engine_vs_oracle(spec, keep_records=True)
        audits = [op_audit({"family": f, "n": k, "q": 3, "seed": seed}, jobs) for f, k in (("GL", 2), ("U", 2), ("Sp", 1), ("Sp", 2))]
        doc = {"verb": "report", "engine_vs_oracle": pairs, "audits": audits}
        doc["ok"] = pairs["ok"] and all(a["checks"]["regular_agreement"] and a["checks"]["conjugation_invariance"] for a in audits)
        written = []
        if figures:
            from .plotting import bound_figure, pairing_heatmap

            written.append(pairing_heatmap(pairs, out / "pairing_heatmap.png"))
            written.append(bound_figure(audits, out / "bound_audit.png"))
        doc["figures"] = sorted(p.name for p in written)
    except FJError as exc:
        _emit({"verb": "report", "ok": False, "error": exc.to_json()}, str(out / "report.json"))
        sys.exit(2)
    except ImportError as exc:
        _emit({"verb": "report", "ok": False, "error": {"error": "missing-dependency", "message": str(exc)}}, str(out / "report.json"))
        sys.exit(2)
    _emit(doc, str(out / "report.json"))
    click.echo(str(out / "report.json"))
    sys.exit(0 if doc["ok"] else 1)


if __name__ == "__main__":
    main()
