import argparse
import json
import logging
import os
import random
import shutil
import sys
from collections.abc import Sequence
from fractions import Fraction
from typing import Iterable

from lpadic import db
from lpadic.config import FORMATS, RunConfig, load_config, parse_character
from lpadic.cyclotomic import DirichletCharacter, characters
from lpadic.errors import DomainError, LPadicError, NotNewformError
from lpadic.helpers import vp
from lpadic.higher_rank import symcube_quotient
from lpadic.iwasawa import IwasawaSeries
from lpadic.lfun import (
    euler_factor_mtt,
    hensel_root,
    integrand_sign,
    interpolation_check,
    kubota_leopoldt,
    lp_evaluate,
    padic_l_function,
    PadicLFunction,
    birch_twisted_value,
    zeta_measure,
)
from lpadic.measures import certify_bounded, check_additivity, check_moment_additivity, riemann_integrate
from lpadic.models import SweepRow, SymbolKey
from lpadic.modsym import EigenSymbol, build_space, eigen_symbol, rational_eigensystems
from lpadic.polygons import (
    gl4_hodge_data,
    gl4_newton_polygon,
    hodge_polygon,
    is_nearly_ordinary,
    modular_hodge_data,
    newton_polygon,
    HeckePolyData,
    sym_power_hecke,
    sym_power_ordinarity_report,
)
from lpadic.progress import sweep
from lpadic.reports import (
    document,
    dumps,
    error,
    format_padic,
    load_document,
    series_family_from_json,
    table,
    value_json,
    verdict,
    warning,
)

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_ERROR = 2
EXIT_POLE = 3


def describe(chi: DirichletCharacter) -> str:
    prim = chi.primitive()
    if prim.n == 0:
        return "trivial"
    desc = f"t:{prim.tame},n:{prim.n}"
    return desc + (f",w:{prim.wild}" if prim.n >= 2 else "")


def _setup_logging(verbose: int):
    level = logging.WARNING if verbose == 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s", force=True)


class CLI:
    _name: str
    _config: RunConfig

    def __init__(self, name: str = "lpadic", config: RunConfig | None = None):
        self._name = name
        self._config = config if config is not None else load_config()

    # --- argument handling -------------------------------------------------

    def _parser(self, prog: str) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(f"{self._name} {prog}")
        parser.add_argument("-p", type=int, help="odd prime")
        parser.add_argument("--prec", type=int, help="p-adic precision N")
        parser.add_argument("--trunc", type=int, help="series truncation M (0: derive from level)")
        parser.add_argument("--levels", type=int, help="number of measure levels")
        parser.add_argument("--format", choices=FORMATS)
        parser.add_argument("--seed", type=int)
        parser.add_argument("--reg-c", dest="reg_c", type=int, help="regularizer c (default 1+p)")
        parser.add_argument("--workers", type=int)
        parser.add_argument("-v", "--verbose", action="count", default=0)
        return parser

    def _resolve(self, opts: argparse.Namespace) -> RunConfig:
        _setup_logging(opts.verbose)
        keys = ("p", "prec", "trunc", "levels", "format", "seed", "reg_c", "workers", "level", "weight", "bound", "char")
        overrides = {k: getattr(opts, k, None) for k in keys}
        if getattr(opts, "no_cache", False):
            overrides["cache"] = False
        return self._config.merged(**overrides).validate()

    def _emit(self, conf: RunConfig, doc: dict, lines: Iterable[str]):
        if conf.format == "json":
            print(dumps(doc))
        else:
            for line in lines:
                print(line)

    # --- commands ------------------------------------------------------------

    def zeta(self, args: Sequence[str]) -> int:
        """
        Values (1-p^k) zeta(-k) of the Kubota-Leopoldt zeta function, from the regularized Bernoulli
        measure. With --check, also integrates x^k over Z_p^x by Riemann sums at the deepest level.
        Exits with code 3 on the branch carrying the pole.
        """
        parser = self._parser("zeta")
        parser.add_argument("-k", type=int, required=True)
        parser.add_argument("--check", action="store_true")
        opts = parser.parse_args(args)
        conf = self._resolve(opts)

        z = kubota_leopoldt(conf.p, opts.k, conf.prec, conf.regularizer)
        ok = True
        lines = [
            f"(1-{conf.p}^{opts.k}) zeta(-{opts.k}) = {z.exact}",
            f"  {conf.p}-adically: {format_padic(z.value)}",
        ]
        body = {"p": z.p, "k": z.k, "c": z.c, "value": value_json(z.value), "exact": str(z.exact), "pole_branch": z.pole_branch}
        if opts.check:
            mu = zeta_measure(conf.p, conf.levels, conf.regularizer)
            report = riemann_integrate(mu, lambda x: Fraction(x) ** opts.k, conf.levels)
            target = -z.exact * (1 - Fraction(conf.regularizer) ** (opts.k + 1))
            agree = vp(report.value - target, conf.p) >= conf.levels - 1
            ok = ok and agree
            lines.append(f"  Riemann sum at level {conf.levels}: {verdict(agree)}")
            body["riemann"] = {"level": conf.levels, "agrees": agree, "stabilized_from": report.stabilized_from()}
        if z.pole_branch:
            lines.append(warning(f"{opts.k + 1} is divisible by {conf.p - 1}: value lies on the branch of the pole"))
        self._emit(conf, document("zeta", body), lines)
        if z.pole_branch:
            return EXIT_POLE
        return EXIT_OK if ok else EXIT_FAILED

    def _modform_symbols(self, conf: RunConfig, newform: int) -> dict[int, EigenSymbol]:
        bound = max(conf.bound, conf.p)
        symbols: dict[int, EigenSymbol] = {}
        keys = {sign: SymbolKey(conf.level, conf.weight, sign, bound) for sign in (1, -1)}
        if conf.cache:
            for sign, key in keys.items():
                if (hit := db.cached_symbol(key)) is not None:
                    symbols[sign] = EigenSymbol.from_json(json.loads(hit.export))
            if len(symbols) == 2:
                log.info(f"eigen-symbols for N={conf.level}, k={conf.weight} from cache")
                return symbols
        space = build_space(conf.level, conf.weight)
        systems = rational_eigensystems(space, 1, bound)
        if not systems:
            raise NotNewformError(f"no rational newform on Gamma0({conf.level}) in weight {conf.weight}")
        if newform >= len(systems):
            raise NotNewformError(f"asked for newform {newform}, found {len(systems)}")
        if len(systems) > 1:
            log.warning(f"{len(systems)} rational newforms found, using number {newform}")
        eigenvalues = systems[newform]
        for sign in (1, -1):
            symbols[sign] = eigen_symbol(space, sign, eigenvalues)
            if conf.cache:
                db.store_symbol(keys[sign], dumps(symbols[sign].to_json()))
        return symbols

    def _lfunction(self, conf: RunConfig, symbols: dict[int, EigenSymbol], levels: int) -> PadicLFunction:
        if conf.level % conf.p == 0:
            raise DomainError(f"p = {conf.p} divides the level {conf.level}")
        a_p = symbols[1].a(conf.p)
        if Fraction(a_p).denominator != 1:
            raise NotNewformError(f"a_{conf.p} = {a_p} is not an integer")
        root = hensel_root(int(a_p), 1, conf.weight, conf.p, conf.level, conf.prec)
        return padic_l_function(symbols, root, levels)

    def modform(self, args: Sequence[str]) -> int:
        """
        The p-adic L-function of a rational newform on Gamma0(N): builds the modular symbol space, the
        eigen-symbols, the unit root alpha and the measure, then runs one action. "measure" prints the
        additivity, boundedness and growth certificates; "lp" evaluates at a character (or all
        characters with --sweep) next to the Euler factor and the Birch-sum identity; "birch" prints
        twisted L-values; "series" writes the Iwasawa series of every tame branch.
        """
        parser = self._parser("modform")
        parser.add_argument("action", choices=("measure", "lp", "birch", "series"))
        parser.add_argument("-N", dest="level", type=int)
        parser.add_argument("-k", dest="weight", type=int)
        parser.add_argument("-j", type=int, default=0)
        parser.add_argument("--char")
        parser.add_argument("--sweep", action="store_true")
        parser.add_argument("--sample", type=int, default=0, help="evaluate only this many random characters")
        parser.add_argument("--bound", type=int, help="Hecke eigenvalue bound")
        parser.add_argument("--newform", type=int, default=0)
        parser.add_argument("--no-cache", dest="no_cache", action="store_true")
        parser.add_argument("--check-additivity", dest="check_additivity", action="store_true")
        parser.add_argument("-o", "--output")
        opts = parser.parse_args(args)
        conf = self._resolve(opts)

        symbols = self._modform_symbols(conf, opts.newform)
        if opts.action == "birch":
            return self._birch(conf, symbols)
        L = self._lfunction(conf, symbols, conf.levels)
        print(f"alpha = {format_padic(L.root.alpha)} (ordinary: {L.root.ordinary})", file=sys.stderr)
        match opts.action:
            case "measure":
                return self._measure(conf, L, opts.check_additivity)
            case "lp":
                return self._lp(conf, L, symbols, opts)
            case "series":
                return self._series(conf, L, opts.output)
        return EXIT_ERROR

    def _measure(self, conf: RunConfig, L: PadicLFunction, additivity: bool) -> int:
        ok = True
        lines = []
        body = {"levels": conf.levels, "signs": {}}
        for sign, mu in sorted(L.measures.items()):
            dist = mu.distribution()
            bounded = certify_bounded(dist)
            growth = L.check_growth()[sign]
            entry = {"bounded": bounded.bounded, "bound_exponent": str(bounded.bound_exponent), "order": growth.h, "admissible": growth.passes}
            lines.append(f"sign {sign:+d}: bounded {verdict(bounded.bounded)} (|mu| <= p^{bounded.bound_exponent})")
            lines.append(f"         order h = {growth.h}: {verdict(growth.passes)}")
            ok = ok and bounded.bounded and growth.passes
            if additivity:
                rep = check_additivity(dist)
                moments = check_moment_additivity(mu)
                entry["violations"] = [[v.level, v.residue] for v in rep.violations + moments.violations]
                lines.append(f"         additivity ({rep.checked + moments.checked} checks): {verdict(rep.ok and moments.ok)}")
                for v in rep.violations + moments.violations:
                    lines.append(f"           level {v.level}, residue {v.residue}")
                ok = ok and rep.ok and moments.ok
            body["signs"][str(sign)] = entry
        self._emit(conf, document("measure", body), lines)
        return EXIT_OK if ok else EXIT_FAILED

    def _lp(self, conf: RunConfig, L: PadicLFunction, symbols: dict[int, EigenSymbol], opts) -> int:
        if opts.sweep:
            chars = characters(conf.p, conf.levels, conf.prec)
            if opts.sample:
                chars = random.Random(conf.seed).sample(chars, min(opts.sample, len(chars)))
        else:
            chars = [parse_character(opts.char or conf.char, conf.p, conf.prec)]

        def evaluate(chi: DirichletCharacter) -> tuple[SweepRow, bool | None]:
            value = lp_evaluate(L, chi, opts.j)
            euler = euler_factor_mtt(chi, opts.j, L.root)
            prim = chi.primitive()
            agree = None
            if opts.j == 0 and L.root.k == 2:
                agree = interpolation_check(L, symbols[integrand_sign(chi, 0)], chi).agree
            row = SweepRow(describe(chi), prim.tame, prim.n, prim.wild, opts.j, value, euler.value, euler.exceptional)
            return row, agree

        results = sorted(sweep(evaluate, chars, conf.workers, show=opts.sweep), key=lambda r: r[0].sort_key)
        ok = all(agree is not False for _, agree in results)
        rows = []
        docs = []
        for row, agree in results:
            rows.append([row.descriptor, row.j, format_padic(row.value), format_padic(row.euler), row.exceptional, "-" if agree is None else verdict(agree)])
            docs.append(
                {
                    "character": row.descriptor,
                    "j": row.j,
                    "value": value_json(row.value),
                    "euler_factor": value_json(row.euler),
                    "exceptional": row.exceptional,
                    "interpolation": agree,
                }
            )
        self._emit(conf, document("lp", {"p": conf.p, "N": conf.level, "k": conf.weight, "values": docs}), [table(["character", "j", "value", "euler factor", "exceptional", "identity"], rows)])
        return EXIT_OK if ok else EXIT_FAILED

    def _birch(self, conf: RunConfig, symbols: dict[int, EigenSymbol]) -> int:
        chi = parse_character(conf.char, conf.p, conf.prec)
        phi = symbols[chi.sign()]
        value = birch_twisted_value(phi, chi)
        self._emit(
            conf,
            document("birch", {"character": describe(chi), "value": value_json(value)}),
            [f"L(f, {describe(chi)}) / Omega = {format_padic(value)}"],
        )
        return EXIT_OK

    def _series(self, conf: RunConfig, L: PadicLFunction, output: str | None) -> int:
        family = L.branches(1, conf.prec)
        if conf.trunc:
            family = {t: IwasawaSeries(g.p, g.tame, g.coeffs[: conf.trunc], g.prec) for t, g in family.items()}
        doc = document("series", {"branches": [g.to_json() for _, g in sorted(family.items())], "provenance": L.provenance})
        if output:
            with open(output, "w") as f:
                f.write(dumps(doc))
            print(f"wrote {len(family)} branches to {output}")
        else:
            print(dumps(doc))
        return EXIT_OK

    def polygon(self, args: Sequence[str]) -> int:
        """
        Newton and Hodge polygons. "sym" builds Sym^m Hecke data from a_p and q = eps p^(k-1) and
        compares the polygons; "gl4" compares the GL(4) polygons for given nu-valuations; "newton"
        prints the Newton polygon of 1 + A_1 T + ... given by --coeffs.
        """
        parser = self._parser("polygon")
        parser.add_argument("kind", choices=("sym", "gl4", "newton"))
        parser.add_argument("-a", type=int)
        parser.add_argument("-q", type=int)
        parser.add_argument("-k", type=int)
        parser.add_argument("-m", type=int, default=1)
        parser.add_argument("--eps", type=int, default=1)
        parser.add_argument("--nu-vals", dest="nu_vals")
        parser.add_argument("--coeffs")
        opts = parser.parse_args(args)
        conf = self._resolve(opts)

        match opts.kind:
            case "sym":
                if opts.a is None or (opts.q is None and opts.k is None):
                    parser.error("sym needs -a and one of -q, -k")
                if opts.k is not None:
                    report = sym_power_ordinarity_report(opts.a, opts.eps, opts.k, conf.p, opts.m)
                    hecke, newton, hodge, ok = report.hecke, report.newton, report.hodge, report.passes
                else:
                    k = int(vp(opts.q, conf.p)) + 1
                    hecke = sym_power_hecke(opts.a, opts.q, opts.m, conf.p)
                    newton = newton_polygon(hecke)
                    hodge = hodge_polygon(modular_hodge_data(k, opts.m))
                    ok = newton == hodge
                lines = [f"e_{i} = {e}" for i, e in enumerate(hecke.elementary()) if i]
                body = {"coefficients": [str(e) for e in hecke.elementary()[1:]]}
            case "gl4":
                if not opts.nu_vals:
                    parser.error("gl4 needs --nu-vals")
                nu = tuple(Fraction(x) for x in opts.nu_vals.split(","))
                newton = gl4_newton_polygon(nu)
                hodge = hodge_polygon(gl4_hodge_data())
                ok = is_nearly_ordinary(newton, gl4_hodge_data())
                lines, body = [], {"nu_vals": [str(x) for x in nu]}
            case "newton":
                if not opts.coeffs:
                    parser.error("newton needs --coeffs")
                newton = newton_polygon(HeckePolyData(conf.p, tuple(Fraction(c) for c in opts.coeffs.split(","))))
                self._emit(conf, document("polygon", {"newton": newton.to_json()}), [f"Newton: {_vertices(newton)}"])
                return EXIT_OK

        lines += [f"Newton: {_vertices(newton)}", f"Hodge:  {_vertices(hodge)}", f"nearly ordinary: {verdict(ok)}"]
        body.update({"newton": newton.to_json(), "hodge": hodge.to_json(), "nearly_ordinary": ok})
        self._emit(conf, document("polygon", body), lines)
        return EXIT_OK if ok else EXIT_FAILED

    def symcube(self, args: Sequence[str]) -> int:
        """
        Branchwise quotient F/G of two series documents (as written by "modform series"), with the
        zeros of G among wild characters of conductor dividing p^bound.
        """
        parser = self._parser("symcube")
        parser.add_argument("action", choices=("quotient",))
        parser.add_argument("F")
        parser.add_argument("G")
        parser.add_argument("--bound", type=int, default=2)
        opts = parser.parse_args(args)
        conf = self._resolve(opts)

        F = series_family_from_json(load_document(opts.F, "series"))
        G = series_family_from_json(load_document(opts.G, "series"))
        report = symcube_quotient(F, G, opts.bound)
        lines = []
        branches = []
        for t, q in sorted(report.quotients.items()):
            zeros = [[z.level, z.wild] for z in report.zeros[t]]
            witness = report.witnesses[t]
            lines.append(f"branch {t}: integral {verdict(not q.remainder)}, {len(zeros)} zeros, shift {q.shift}, pole {q.pole}")
            for reason in q.reasons:
                lines.append(f"  {reason}")
            branches.append(
                {
                    "t": t,
                    "quotient": q.quotient.to_json(),
                    "remainder": q.remainder,
                    "pole": q.pole,
                    "zeros": zeros,
                    "witness": None if witness is None else [witness.level, witness.wild],
                    "trivial_value": value_json(report.trivial_values[t]),
                }
            )
        self._emit(conf, document("symcube", {"branches": branches, "assumptions": report.assumptions}), lines)
        return EXIT_OK if report.integral else EXIT_FAILED

    def cache(self, args: Sequence[str]) -> int:
        """
        Manage the eigen-symbol cache: "migrate" creates it, "clear [N]" forgets entries.
        """
        match list(args):
            case ["migrate"]:
                db.migrate()
            case ["clear"]:
                print(f"removed {db.forget_symbols()} cached symbols")
            case ["clear", level]:
                print(f"removed {db.forget_symbols(int(level))} cached symbols")
            case _:
                print(error("usage: cache migrate | cache clear [N]"))
                return EXIT_ERROR
        return EXIT_OK

    def run(self, cmd: str, *args: str) -> int:
        try:
            match cmd:
                case "zeta":
                    return self.zeta(args)
                case "modform":
                    return self.modform(args)
                case "polygon":
                    return self.polygon(args)
                case "symcube":
                    return self.symcube(args)
                case "cache":
                    return self.cache(args)
                case "help" | "--help" | "-h":
                    self.help()
                    return EXIT_OK
        except LPadicError as e:
            print(error(str(e)))
            return EXIT_ERROR

        print(error(f"unknown command {cmd!r}"))
        return EXIT_FAILED

    def help(self):
        print(f"""{self._name} -- p-adic L-functions of characters and modular forms

USAGE: {self._name} COMMAND (ARGS*)

COMMANDS:""")

        commands = {
            "zeta": docstr_to_pars(CLI.zeta.__doc__),
            "modform": docstr_to_pars(CLI.modform.__doc__),
            "polygon": docstr_to_pars(CLI.polygon.__doc__),
            "symcube": docstr_to_pars(CLI.symcube.__doc__),
            "cache": docstr_to_pars(CLI.cache.__doc__),
        }
        width = min(shutil.get_terminal_size((80, 20)).columns, 100)
        name_width = max(len(k) for k in commands) + 8
        spacer = " " * name_width

        for name, pars in commands.items():
            print(f"{name:<{name_width}}", end="")
            for p in break_pars(pars, width - name_width):
                print(f"{p}\n{spacer}", end="")
            print("\r", end="")


def _vertices(poly) -> str:
    return " ".join(f"({x},{y})" for x, y in poly.breakpoints())


def docstr_to_pars(docstr: str) -> tuple[str, ...]:
    """
    Clean a docstring and convert it to a list of paragraphs.
    """
    pars = []
    par = []
    for line in docstr.split("\n"):
        line = line.strip()
        if not line and par:
            pars.append(" ".join(par))
            par = []
            continue
        if not line:
            continue
        par.append(line)
    if par:
        pars.append(" ".join(par))
    return tuple(pars)


def break_pars(pars: Sequence[str], par_len: int) -> Iterable[str]:
    is_first = True
    for par in pars:
        if not is_first:
            yield ""
        is_first = False

        layout_par = []
        size = 0
        for w in par.split(" "):
            if size + len(w) > par_len:
                if not layout_par:
                    yield w
                    continue
                yield " ".join(layout_par)
                layout_par = [w]
                size = len(w) + 1
                continue
            layout_par.append(w)
            size += len(w) + 1
        if layout_par:
            yield " ".join(layout_par)


def main():
    if len(sys.argv) < 2:
        CLI("lpadic").help()
        sys.exit(1)

    name, cmd, *args = sys.argv
    name = os.path.basename(name)

    sys.exit(CLI(name).run(cmd, *args))
