"""Command line entry point: batch verification and an element calculator.

``affshuffle verify`` runs named suites of exact identity checks and writes a
deterministic JSON report. The remaining subcommands build one object and print
it as canonical JSON.
"""

from __future__ import annotations

import json
import sys
import time
from fractions import Fraction
from pathlib import Path

import click

from . import classic, pairing, pbw, suites
from .wheel import iterated_residue

MAX_KMAX = 4
KINDS = ("F", "Fbar", "P", "Pimag", "classicA", "classicB")


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


def _sign(text: str) -> int:
    if text in ("+", "1", "+1", "plus"):
        return 1
    if text in ("-", "-1", "minus"):
        return -1
    raise click.BadParameter(f"sign must be + or -, got {text!r}")


def _mus(text: str | None) -> list[Fraction]:
    if not text:
        return []
    try:
        return [Fraction(part) for part in text.split(",") if part.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise click.BadParameter(f"bad slope list {text!r}: {exc}") from exc


def build_element(kind: str, n: int, sign: int = 1, i=None, j=None, k=None, mu=None, l=None, r=None):
    """Construct a named element; raises ``ValueError`` on an invalid label."""
    if kind in ("F", "Fbar", "P"):
        if None in (i, j, k):
            raise ValueError(f"{kind} needs --i, --j and --k")
        if j <= i or k <= 0:
            raise ValueError(f"need i < j and k > 0, got [{i};{j}) with k = {k}")
        if kind == "F":
            return pbw.F(n, sign, i, j, k)
        if kind == "Fbar":
            return pbw.Fbar(n, sign, i, j, k)
        return pbw.P_simple(n, sign, i, j, k)
    if kind == "Pimag":
        if None in (mu, l, r):
            raise ValueError("Pimag needs --mu, --l and --r")
        return pbw.P_imaginary_solve(n, mu, l, r, sign).element
    if kind in ("classicA", "classicB"):
        if None in (i, j, mu):
            raise ValueError(f"{kind} needs --i, --j and --mu")
        fn = classic.classic_A if kind == "classicA" else classic.classic_B
        return fn(n, mu, i, j)
    raise ValueError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")


def parse_spec(spec: str, n: int):
    """``KIND:SIGN:a:b:c``: ``(i, j, k)`` for F/Fbar/P, ``(μ, l, r)`` for Pimag."""
    parts = spec.split(":")
    if len(parts) != 5:
        raise click.BadParameter(f"expected KIND:SIGN:a:b:c, got {spec!r}")
    kind, sgn, a, b, c = parts
    sign = _sign(sgn)
    try:
        if kind == "Pimag":
            return build_element(kind, n, sign, mu=Fraction(a), l=int(b), r=int(c))
        return build_element(kind, n, sign, i=int(a), j=int(b), k=int(c))
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc


def element_json(X) -> dict:
    if isinstance(X, classic.ColorSymFunc):
        return {"n": X.n, "d": list(X.d), "expr": X.expr.to_str()}
    return X.to_json()


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def run_suite(suite: str, n: int, kmax: int, mus, fail_fast: bool = False, timings: dict | None = None) -> dict:
    """Run the checks and return the report without the wall time."""
    checks = suites.build(suite, n, kmax, mus)
    rows = []
    first_failure = None
    for chk in checks:
        t0 = time.perf_counter()
        try:
            ok, witness = chk.run()
        except Exception as exc:  # reported as a failed check, with the message
            ok, witness = False, {"error": f"{type(exc).__name__}: {exc}"}
        if timings is not None:
            timings[chk.id] = time.perf_counter() - t0
        row = {"id": chk.id, "anchor": chk.ref, "status": "pass" if ok else "fail", "witness": witness}
        rows.append(row)
        if not ok and first_failure is None:
            first_failure = row
            if fail_fast:
                break
    report = {
        "suite": suite,
        "n": n,
        "params": {"kmax": kmax, "mu": [str(m) for m in mus]},
        "checks": rows,
        "convention": {"K1": pairing.CONVENTION["K1"], "K2": pairing.CONVENTION["K2"]},
    }
    if first_failure is not None:
        report["counterexample"] = first_failure
    return report


def render_figures(report: dict, timings: dict, outdir: Path) -> list[Path]:
    """Write a status chart and a timing chart for the report into ``outdir``."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    outdir.mkdir(parents=True, exist_ok=True)
    groups: dict[str, list[int]] = {}
    for row in report["checks"]:
        counts = groups.setdefault(row["anchor"], [0, 0])
        counts[0 if row["status"] == "pass" else 1] += 1
    names = sorted(groups)
    passed = [groups[g][0] for g in names]
    failed = [groups[g][1] for g in names]

    paths = []
    fig, ax = plt.subplots(figsize=(7, 0.4 * len(names) + 1.5))
    ax.barh(names, passed, color="#4c9a2a", label="pass")
    ax.barh(names, failed, left=passed, color="#c0392b", label="fail")
    ax.set_xlabel("checks")
    ax.set_title(f"{report['suite']} (n = {report['n']})")
    ax.legend(loc="upper left", bbox_to_anchor=(1.01, 1.0))
    fig.tight_layout()
    path = outdir / f"{report['suite']}-status.png"
    fig.savefig(path, dpi=100)
    plt.close(fig)
    paths.append(path)

    ids = [row["id"] for row in report["checks"]]
    secs = [timings.get(i, 0.0) for i in ids]
    fig, ax = plt.subplots(figsize=(7, 3))
    ax.plot(range(len(secs)), secs, marker=".", linestyle="none")
    ax.set_xlabel("check index")
    ax.set_ylabel("seconds")
    ax.set_yscale("symlog", linthresh=1e-3)
    ax.set_title(f"{report['suite']}: time per check")
    fig.tight_layout()
    path = outdir / f"{report['suite']}-timing.png"
    fig.savefig(path, dpi=100)
    plt.close(fig)
    paths.append(path)
    return paths


@click.group()
def main():
    """Exact computations in the matrix-valued affine shuffle algebra."""


@main.command()
@click.option("--suite", type=click.Choice(suites.SUITES + ("all",)), default="all", show_default=True)
@click.option("--n", "n", type=int, default=2, show_default=True)
@click.option("--kmax", type=int, default=3, show_default=True)
@click.option("--mu", "mu", default=None, help="Comma separated slopes, e.g. 1,3/2.")
@click.option("--json-out", type=click.Path(dir_okay=False, path_type=Path), default=None)
@click.option("--fail-fast", is_flag=True)
@click.option("--figures", type=click.Path(file_okay=False, path_type=Path), default=None)
@click.option("--deterministic", is_flag=True, help="Leave wall_time out of the report.")
@click.option("--unsafe", is_flag=True, help="Allow kmax above the guard.")
@click.option("--config", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None,
              help="JSON file with option defaults; explicit flags win.")
@click.pass_context
def verify(ctx, suite, n, kmax, mu, json_out, fail_fast, figures, deterministic, unsafe, config):
    """Run a suite of exact identity checks."""
    if config is not None:
        data = json.loads(config.read_text())
        params = {"suite": suite, "n": n, "kmax": kmax, "mu": mu, "fail_fast": fail_fast, "unsafe": unsafe}
        for key in params:
            if key in data and ctx.get_parameter_source(key) != click.core.ParameterSource.COMMANDLINE:
                params[key] = data[key]
        suite, n, kmax, mu = params["suite"], int(params["n"]), int(params["kmax"]), params["mu"]
        fail_fast, unsafe = bool(params["fail_fast"]), bool(params["unsafe"])
        if suite not in suites.SUITES + ("all",):
            raise click.UsageError(f"unknown suite {suite!r}")
    if n not in (2, 3):
        raise click.UsageError("--n must be 2 or 3")
    if kmax < 1 or (kmax > MAX_KMAX and not unsafe):
        raise click.UsageError(f"--kmax must lie in 1..{MAX_KMAX} (use --unsafe for more)")
    mus = _mus(mu) if not isinstance(mu, list) else [Fraction(str(m)) for m in mu]

    timings: dict[str, float] = {}
    t0 = time.perf_counter()
    report = run_suite(suite, n, kmax, mus, fail_fast, timings)
    if not deterministic:
        report["wall_time"] = round(time.perf_counter() - t0, 3)
    text = _dump(report)
    if json_out is not None:
        json_out.write_text(text + "\n")
    for row in report["checks"]:
        click.echo(f"{row['status'].upper()}\t{row['id']}")
    npass = sum(r["status"] == "pass" for r in report["checks"])
    click.echo(f"{npass}/{len(report['checks'])} checks passed; convention K1={report['convention']['K1']} K2={report['convention']['K2']}")
    if figures is not None:
        for path in render_figures(report, timings, figures):
            click.echo(f"figure\t{path}")
    if "counterexample" in report:
        click.echo(_dump(report["counterexample"]), err=True)
        sys.exit(1)


# ---------------------------------------------------------------------------
# element calculator
# ---------------------------------------------------------------------------


@main.command()
@click.argument("kind", type=click.Choice(KINDS))
@click.option("--sign", default="+", show_default=True)
@click.option("--i", "i", type=int, default=None)
@click.option("--j", "j", type=int, default=None)
@click.option("--k", "k", type=int, default=None)
@click.option("--mu", "mu", default=None)
@click.option("--l", "l", type=int, default=None)
@click.option("--r", "r", type=int, default=None)
@click.option("--n", "n", type=int, default=2, show_default=True)
def element(kind, sign, i, j, k, mu, l, r, n):
    """Build an element and print it as canonical JSON."""
    try:
        X = build_element(kind, n, _sign(sign), i, j, k, Fraction(mu) if mu is not None else None, l, r)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    click.echo(_dump({"kind": kind, "element": element_json(X)}))


@main.command()
@click.option("--left", required=True, help="Plus-side element, KIND:+:a:b:c.")
@click.option("--right", required=True, help="Minus-side element, KIND:-:a:b:c.")
@click.option("--n", "n", type=int, default=2, show_default=True)
def pair(left, right, n):
    """Evaluate the pairing of a plus-side and a minus-side element."""
    X, Y = parse_spec(left, n), parse_spec(right, n)
    val = pairing.pair_general(X, Y)
    click.echo(_dump({"left": left, "right": right, "value": val.to_str(), "convention": dict(pairing.CONVENTION)}))


@main.command()
@click.option("--i", "i", type=int, required=True)
@click.option("--j", "j", type=int, required=True)
@click.option("--of", "of", required=True, help="Element spec KIND:SIGN:a:b:c.")
@click.option("--n", "n", type=int, default=2, show_default=True)
def alpha(i, j, of, n):
    """The α functional of the given label applied to an element."""
    X = parse_spec(of, n)
    sign = _sign(of.split(":")[1])
    val = pbw.alpha(n, sign, i, j, X)
    click.echo(_dump({"of": of, "label": [i, j], "value": val.to_str()}))


@main.command()
@click.option("--mu", "mu", required=True)
@click.option("--of", "of", required=True, help="Element spec KIND:+:a:b:c.")
@click.option("--split", "split", type=int, required=True, help="Arity of the left factor.")
@click.option("--n", "n", type=int, default=2, show_default=True)
def coproduct(mu, of, split, n):
    """The summands of the leading coproduct with a given left arity."""
    X = parse_spec(of, n)
    try:
        terms = pbw.delta_mu_split(X, split, Fraction(mu))
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    out = [{"psi": list(t.psi), "tensor": t.tensor.to_json()} for t in terms]
    click.echo(_dump({"of": of, "mu": str(Fraction(mu)), "split": split, "terms": out}))


@main.command()
@click.option("--lambda", "lam", required=True, help="Composition, e.g. 2 or 1,1.")
@click.option("--of", "of", required=True, help="Element spec KIND:SIGN:a:b:c.")
@click.option("--n", "n", type=int, default=2, show_default=True)
def residue(lam, of, n):
    """The iterated residue of an element along a composition."""
    X = parse_spec(of, n)
    parts = tuple(int(p) for p in lam.split(","))
    if sum(parts) != X.k:
        raise click.UsageError(f"composition {parts} does not sum to the arity {X.k}")
    out = iterated_residue(X, parts, _sign(of.split(":")[1]))
    click.echo(_dump({"of": of, "lambda": list(parts), "value": out.to_json()}))


@main.command(name="classic")
@click.argument("kind", type=click.Choice(("A", "B")))
@click.option("--mu", "mu", required=True)
@click.option("--i", "i", type=int, required=True)
@click.option("--j", "j", type=int, required=True)
@click.option("--n", "n", type=int, default=2, show_default=True)
def classic_cmd(kind, mu, i, j, n):
    """A scalar PBW element with its wheel and symmetry status."""
    try:
        X = build_element(f"classic{kind}", n, i=i, j=j, mu=Fraction(mu))
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    click.echo(_dump({
        "element": element_json(X),
        "symmetric": X.is_symmetric(),
        "wheel": classic.classic_wheel_check(X),
    }))


if __name__ == "__main__":
    main()
