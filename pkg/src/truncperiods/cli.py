"""Command-line front end.

Exit codes: 0 computed / congruence holds, 1 congruence fails, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import ahyp, hwdwork
from .builtins import BUILTIN_NAMES, SECTION6_EXPONENTS, builtin_f, builtin_g
from .errors import InputError
from .laurent import LaurentPoly, from_json
from .polytope import open_subset

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


@dataclass
class RunSpec:
    command: str
    sub: str | None = None
    builtin: str | None = None
    input: str | None = None
    output: str | None = None
    format: str = "text"
    params: dict = field(default_factory=dict)


class Outcome:
    def __init__(self, text: str, payload, ok: bool = True):
        self.text, self.payload, self.ok = text, payload, ok


# -- input helpers ------------------------------------------------------------------------

def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _need(spec: RunSpec, *names):
    missing = [n for n in names if spec.params.get(n) is None]
    if missing:
        raise InputError(f"{spec.command}: missing required option(s) "
                         + ", ".join("--" + n for n in missing))


def _source(spec: RunSpec):
    if (spec.builtin is None) == (spec.input is None):
        raise InputError("give exactly one of --builtin or --input")


def _load_f(spec: RunSpec) -> LaurentPoly:
    _source(spec)
    if spec.builtin is not None:
        return builtin_f(spec.builtin)
    return from_json(_load_json(spec.input))


def _load_g(spec: RunSpec) -> LaurentPoly:
    _source(spec)
    if spec.builtin is not None:
        return builtin_g(spec.builtin)
    return from_json(_load_json(spec.input))


def _load_config(spec: RunSpec):
    _source(spec)
    if spec.builtin is not None:
        if spec.builtin != "section6":
            raise InputError(f"built-in {spec.builtin!r} is not an A-configuration; use section6")
        return ahyp.AConfig(SECTION6_EXPONENTS), None
    return ahyp.AConfig.from_json(_load_json(spec.input))


def _parse_mu(text, default="interior"):
    if text is None:
        return default
    if text in ("all", "interior"):
        return text
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"--mu must be all, interior or a JSON list: {exc}") from exc


def _ints(text: str, what: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(":", ",").split(",") if x.strip()]
    except ValueError:
        raise InputError(f"{what} must be comma-separated integers, got {text!r}") from None


def _matrix_payload(mat):
    return {"labels": [list(x) if isinstance(x, tuple) else x for x in mat.labels],
            "entries": [[str(x) for x in r] for r in mat.rows]}


def _report_outcome(rep: hwdwork.CongruenceReport) -> Outcome:
    return Outcome(rep.summary(), rep.to_json(), rep.holds)


# -- commands -------------------------------------------------------------------------------

def cmd_hw(spec: RunSpec) -> Outcome:
    _need(spec, "m")
    f = _load_f(spec)
    m = spec.params["m"]
    p, s = spec.params.get("p"), spec.params.get("s") or 1
    mu = open_subset(f.newton_polytope(), _parse_mu(spec.params.get("mu")))
    if p is not None:
        f = f.to_residues(p, s)
    beta = hwdwork.hw_beta_matrix(f, mu, m)
    gamma = hwdwork.hw_gamma_matrix(f, mu, m)
    text = f"mu lattice points: {list(mu.lattice_points)}\n"
    text += f"beta_{m}:\n{beta}\ngamma_{m}:\n{gamma}"
    return Outcome(text, {"m": m, "mu": [list(u) for u in mu.lattice_points],
                          "beta": _matrix_payload(beta), "gamma": _matrix_payload(gamma)})


def cmd_ct_seq(spec: RunSpec) -> Outcome:
    _need(spec, "T")
    g = _load_g(spec)
    T = spec.params["T"]
    p, s = spec.params.get("p"), spec.params.get("s")
    if p is not None:
        b = hwdwork.ct_sequence_mod(g, p, s or 1, T - 1)
    else:
        b = hwdwork.hw_ct_sequence(g, T - 1)
    text = "b_k for k < {}: {}".format(T, ", ".join(str(x) for x in b))
    return Outcome(text, {"T": T, "b": [str(x) for x in b]})


def _perturb_index(spec):
    raw = spec.params.get("perturb")
    return None if raw is None else _ints(raw, "--perturb")[0]


def cmd_verify(spec: RunSpec) -> Outcome:
    kind, P = spec.sub, spec.params
    if kind == "main5":
        _need(spec, "p", "smax", "M")
        config, mu_file = _load_config(spec)
        mu = _parse_mu(P.get("mu")) if P.get("mu") is not None else (mu_file or "all")
        perturb = None
        if P.get("perturb") is not None:
            v = _ints(P["perturb"], "--perturb")
            if len(v) != 2 + config.N:
                raise InputError(f"main5 --perturb is j,i followed by {config.N} key entries")
            perturb = (v[0], v[1], tuple(v[2:]))
        return _report_outcome(ahyp.ah_verify_main5(config, mu, P["p"], P["smax"], P["M"],
                                                    perturb))
    if kind == "limits":
        _need(spec, "p", "smax", "T")
        f = _load_f(spec)
        mu = open_subset(f.newton_polytope(), _parse_mu(P.get("mu")))
        perturb = None
        if P.get("perturb") is not None:
            v = _ints(P["perturb"], "--perturb")
            if len(v) != 4:
                raise InputError("limits --perturb is s,i,j,k")
            perturb = tuple(v)
        return _report_outcome(hwdwork.hw_verify_limits(
            f, mu, P["p"], P["smax"], P["T"], P.get("variant") or "gamma",
            P.get("which") or "lambda", perturb))
    perturb = _perturb_index(spec)
    if kind == "mev":
        _need(spec, "p", "s")
        if spec.builtin == "legendre":
            T = P.get("T") or 3 * P["p"] ** P["s"]
            return _report_outcome(hwdwork.verify_dwork_original(P["p"], P["s"], T, perturb))
        g = _load_g(spec)
        return _report_outcome(hwdwork.hw_verify_mev(g, P["p"], P["s"], P.get("T"), perturb))
    if kind in ("any-m", "deriv"):
        _need(spec, "p")
        if P.get("m") is None and P.get("s") is None:
            raise InputError(f"verify {kind}: give --m or --s")
        m = P["m"] if P.get("m") is not None else P["p"] ** P["s"]
        g = _load_g(spec)
        fn = hwdwork.hw_verify_any_m if kind == "any-m" else hwdwork.hw_verify_derivative
        return _report_outcome(fn(g, P["p"], m, P.get("T"), perturb))
    raise InputError(f"unknown verifier {kind!r}")


def cmd_unit_root(spec: RunSpec) -> Outcome:
    _need(spec, "p", "z0")
    P = spec.params
    s = P.get("s") or 1
    kind = P.get("kind") or ("ct-series" if spec.builtin in ("example-1d", "dwork-quartic")
                             or spec.input else "legendre")
    g = _load_g(spec) if kind == "ct-series" else None
    res = hwdwork.hw_unit_root(kind, P["p"], s, P["z0"], g, P.get("lift"))
    lines = [f"lambda = {res.lambda_trunc.value} mod {P['p']}^{s} (truncation quotient at "
             f"t0 = {P['z0']})"]
    if res.a_p is not None:
        lines.append(f"a_p = {res.a_p}, hensel lambda = {res.lambda_hensel.value} mod "
                     f"{P['p']}^{s}")
        lines.append(f"agreement: {'yes' if res.agrees else 'no'}")
    lines.append(f"other lift {res.lambda_other_lift.value}: "
                 f"{'same' if res.lift_independent else 'different'}")
    ok = res.agrees is not False and res.lift_independent is not False
    return Outcome("\n".join(lines), res.to_json(), ok)


def cmd_ahyp(spec: RunSpec) -> Outcome:
    config, mu_file = _load_config(spec)
    P = spec.params
    if spec.sub == "kernel":
        basis = config.kernel_basis
        check = ahyp.ah_cone_check(config, P.get("M") or 6)
        text = "kernel basis: {}\ncone pointed up to weight {}: {}\nweight monotone: {}".format(
            [list(b) for b in basis], check.max_weight, "yes" if check.pointed else "no",
            "yes" if check.weight_monotone else "no")
        return Outcome(text, {"kernel_basis": [list(b) for b in basis],
                              "cone": check.to_json()}, check.pointed)
    if spec.sub == "psi":
        _need(spec, "m")
        m = P["m"]
        M = P.get("M") if P.get("M") is not None else m - 1
        mu = _parse_mu(P.get("mu")) if P.get("mu") is not None else (mu_file or "all")
        cols, _ = ahyp.columns_for_mu(config, mu)
        mat = ahyp.ah_psi_tilde(config, cols, m, M, P.get("p"),
                                (P.get("s") or 1) if P.get("p") else None)
        payload = _matrix_payload(mat)
        text = f"columns {cols}, m = {m}, weight <= {M}\n{mat}"
        if P.get("oracle"):
            oracle = ahyp.ah_psi_tilde_ct_oracle(config, m, cols, M)
            same = oracle.map(lambda x: x.truncate(M)) == ahyp.ah_psi_tilde(config, cols, m, M)
            text += f"\nconstant-term oracle agrees: {'yes' if same else 'no'}"
            payload["oracle_agrees"] = same
            return Outcome(text, payload, same)
        return Outcome(text, payload)
    if spec.sub == "period":
        _need(spec, "u", "k", "i", "M")
        u = _ints(P["u"], "--u")
        ps = ahyp.ah_period_series(config, u, P["k"], P["i"], P["M"])
        rows = sorted(ps.terms.items(), key=lambda kv: (-kv[0][P["i"] - 1], kv[0]))
        text = "\n".join(f"{c} * v^{list(e)}" for e, c in rows) or "no lattice solutions"
        return Outcome(text, {"u": list(ps.u), "k": ps.k, "i": ps.i, "M": ps.M,
                              "prefactor": None if ps.prefactor is None else list(ps.prefactor),
                              "terms": [{"exps": list(e), "coeff": str(c)} for e, c in rows]})
    raise InputError(f"unknown ahyp subcommand {spec.sub!r}")


COMMANDS = {"hw": cmd_hw, "ct-seq": cmd_ct_seq, "verify": cmd_verify,
            "unit-root": cmd_unit_root, "ahyp": cmd_ahyp}


# -- argument parsing -----------------------------------------------------------------------

def _common(sp):
    sp.add_argument("--builtin", choices=BUILTIN_NAMES)
    sp.add_argument("--input", help="JSON polynomial or A-configuration file")
    sp.add_argument("--output", help="write the report here instead of stdout")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    for name in ("p", "s", "smax", "m", "T", "M", "k", "i", "z0", "lift"):
        sp.add_argument(f"--{name}", type=int)
    sp.add_argument("--mu", help='"all", "interior" or a JSON list')
    sp.add_argument("--perturb", help="negative control: bump one coefficient")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="truncperiods",
                                     description="Truncated period series and their congruences")
    sub = parser.add_subparsers(dest="command", required=True)
    _common(sub.add_parser("hw", help="beta_m and gamma_m matrices"))
    _common(sub.add_parser("ct-seq", help="constant terms of g^k for k < T"))
    v = sub.add_parser("verify", help="check a congruence")
    v.add_argument("kind", choices=("mev", "any-m", "deriv", "limits", "main5"))
    _common(v)
    v.add_argument("--variant", choices=("beta", "gamma"))
    v.add_argument("--which", choices=("lambda", "ndelta"))
    u = sub.add_parser("unit-root", help="unit root from a truncation quotient")
    _common(u)
    u.add_argument("--kind", choices=("legendre", "ct-series"))
    a = sub.add_parser("ahyp", help="A-hypergeometric period matrices")
    a.add_argument("kind", choices=("psi", "kernel", "period"))
    _common(a)
    a.add_argument("--u", help="exponent vector, comma separated")
    a.add_argument("--oracle", action="store_true", help="compare with the constant-term oracle")
    return parser


def spec_from_args(args) -> RunSpec:
    skip = {"command", "kind", "builtin", "input", "output", "format"}
    params = {k: v for k, v in vars(args).items() if k not in skip}
    return RunSpec(args.command, getattr(args, "kind", None), args.builtin, args.input,
                   args.output, args.format, params)


def run(spec: RunSpec) -> tuple[int, str]:
    try:
        out = COMMANDS[spec.command](spec)
    except InputError as exc:
        return EXIT_INPUT, f"error: {exc}"
    if spec.format == "json":
        text = json.dumps(out.payload, indent=2, sort_keys=True)
    else:
        text = out.text
    return (EXIT_OK if out.ok else EXIT_FAIL), text


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    code, text = run(spec_from_args(args))
    if code == EXIT_INPUT:
        print(text, file=sys.stderr)
        return code
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
