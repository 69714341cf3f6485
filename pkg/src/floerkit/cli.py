"""Command-line front end.  Every subcommand writes one JSON report.

Module errors produce a JSON object ``{"error": {"code", "message",
"witness"}}`` on stdout and exit status 1.  Diagnostic verdicts such as
"excluded" or "violated" are data and exit 0.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from fractions import Fraction

import numpy as np

from . import __version__
from .conley import CellSet, conley_index, discretize_flow, flow_from_json
from .conley.flows import SignAction
from .errors import FloerkitError, SchemaError
from .lattice import form_from_json, froyshov_inequality_check, furuta_bound_check, make_form, smith_flow_check
from .morse import check_d_squared, example_double_well, example_non_compact, floer_comparison, morse_from_json, morse_homology
from .swf import (
    catalog_complex,
    complex_from_json,
    dualize,
    extract_invariants,
    invariants_of_module,
    module_homology,
    nonsplitting_certificate,
    tate_pattern_check,
    tensor_disjoint_union,
)

MORSE_CATALOG = {"non_compact": example_non_compact, "double_well": example_double_well}
SWEEP_BLOCKS = {"0": [], "-E8": ["-E8"], "-E8+-E8": ["-E8", "-E8"]}


def _default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, Fraction):
        return str(o)
    raise TypeError("not serializable: %r" % type(o))


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, default=_default) + "\n"


def write_atomic(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".floerkit-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise SchemaError("input file not found", {"path": path})
    except json.JSONDecodeError as e:
        raise SchemaError("input is not valid JSON: %s" % e, {"path": path})


# input helpers


def _flow(args):
    if args.catalog:
        obj = {"catalog": args.catalog}
    elif args.input:
        obj = load_json(args.input)
    else:
        raise SchemaError("give a flow file or --catalog")
    if args.resolution is not None:
        if "catalog" not in obj:
            raise SchemaError("--resolution only applies to catalog flows")
        obj = dict(obj, resolution=args.resolution)
    return flow_from_json(obj, args.allow_unknown)


def _region(t, args):
    if args.region is None:
        return CellSet.full(t)
    vals = args.region
    n = t.dimension
    if len(vals) != 2 * n:
        raise SchemaError("--region needs %d numbers (lower then upper corner)" % (2 * n))
    return CellSet.from_region(t, vals[:n], vals[n:])


def _complex(args, source=None, catalog=None):
    if catalog:
        return catalog_complex(catalog, args.flavor, args.field or 2)
    path = source or args.input
    if not path:
        raise SchemaError("give a complex file or --catalog")
    obj = load_json(path)
    if args.field is not None and int(obj.get("field", 2)) != args.field:
        raise SchemaError("--field differs from the field of the complex file", {"file": obj.get("field"), "flag": args.field})
    return complex_from_json(obj, args.allow_unknown)


def _window(args):
    return tuple(args.window) if args.window else None


def _floer_report(c, window):
    h = module_homology(c, window)
    return {
        "complex": c.to_json(),
        "homology": h.to_json(),
        "invariants": invariants_of_module(h).to_json(),
        "tate": tate_pattern_check(h).to_json(),
    }


# subcommands


def cmd_conley(args):
    spec = _flow(args)
    t = discretize_flow(spec)
    n = _region(t, args)
    pair, hom = conley_index(t, n, args.field or 0)
    if args.plot:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x%d" % (i + 1) for i in range(t.dimension)] + ["role"])
        for role, cs in (("invariant", pair.invariant), ("exit", pair.exit_set)):
            for row in cs.coordinates(t):
                w.writerow(["%.12g" % x for x in row] + [role])
        write_atomic(args.plot, buf.getvalue())
    return {
        "subcommand": "conley",
        "flow": spec.name,
        "resolution": list(spec.resolution),
        "index_pair": {
            "n_prime": len(pair.n_prime),
            "exit_set": len(pair.exit_set),
            "invariant": len(pair.invariant),
        },
        "verification": pair.report.to_json(),
        "homology": hom.to_json(),
    }


def _morse(args, path=None, name=None):
    if name:
        if name not in MORSE_CATALOG:
            raise SchemaError("unknown Morse example %r" % name, {"known": sorted(MORSE_CATALOG)})
        return MORSE_CATALOG[name]()
    path = path or args.input
    if not path:
        raise SchemaError("give a Morse data file or --catalog")
    return morse_from_json(load_json(path))


def cmd_morse(args):
    d = _morse(args, name=args.catalog)
    report = check_d_squared(d)
    out = {"subcommand": "morse", "data": d.to_json(), "d_squared": report.to_json()}
    out["homology"] = morse_homology(d).to_json()
    return out


def cmd_compare(args):
    d = _morse(args, args.morse, args.morse_catalog)
    spec = _flow(args)
    t = discretize_flow(spec)
    rep = floer_comparison(d, t, _region(t, args))
    return dict({"subcommand": "compare", "flow": spec.name}, **rep.to_json())


def cmd_floer(args):
    c = _complex(args, catalog=args.catalog)
    return dict({"subcommand": "floer"}, **_floer_report(c, _window(args)))


def cmd_dual(args):
    c = _complex(args, catalog=args.catalog)
    return dict({"subcommand": "dual"}, **_floer_report(dualize(c), None))


def cmd_tensor(args):
    sources = [(p, None) for p in args.inputs] + [(None, n) for n in args.catalog or []]
    if len(sources) == 1:
        sources = sources * 2
    if len(sources) != 2:
        raise SchemaError("tensor needs two complexes (files or --catalog, given once to square)")
    cs = [_complex(args, p, n) if p else _complex(args, catalog=n) for p, n in sources]
    out = dict({"subcommand": "tensor"}, **_floer_report(tensor_disjoint_union(*cs), _window(args)))
    if cs[0].flavor == "Pin2":
        # defect of each of alpha, beta, gamma: value on the union minus the sum over the factors
        parts = [extract_invariants(c).alpha_beta_gamma for c in cs]
        inv = out["invariants"]
        out["additivity_defect"] = {
            key: inv[key] - parts[0][i] - parts[1][i] for i, key in enumerate(("alpha", "beta", "gamma"))
        }
    return out


def cmd_certify(args):
    c = _complex(args, catalog=args.catalog)
    return {"subcommand": "certify", "certificate": nonsplitting_certificate(c)}


def cmd_lattice(args):
    out: dict = {"subcommand": "lattice", "h": args.h, "bound": args.bound}
    if args.sweep:
        rows = []
        for label, blocks in SWEEP_BLOCKS.items():
            for m in range(5):
                v = froyshov_inequality_check(args.h, make_form(m, blocks), args.bound)
                rows.append(dict({"J": label, "m": m}, **v.to_json()))
        out["sweep"] = rows
        out["allowed_J"] = sorted({r["J"] for r in rows if r["verdict"] == "allowed"}, key=list(SWEEP_BLOCKS).index)
    else:
        if args.input:
            f = form_from_json(load_json(args.input))
        else:
            f = make_form(args.m, args.block or [])
        out["form"] = f.to_json()
        out["froyshov"] = froyshov_inequality_check(args.h, f, args.bound).to_json()
    if args.b2 is not None:
        out["furuta"] = furuta_bound_check(args.b2, args.sigma if args.sigma is not None else 0)
    return out


def cmd_smith(args):
    spec = _flow(args)
    if args.action:
        action = SignAction.from_signed([int(x) for x in args.action.split(",")])
    elif spec.action is not None:
        action = spec.action
    else:
        raise SchemaError("give --action (for example -1,2) or a flow carrying an action")
    region = args.region
    n = spec.dimension
    if region is not None and len(region) != 2 * n:
        raise SchemaError("--region needs %d numbers (lower then upper corner)" % (2 * n))
    rep = smith_flow_check(
        spec, action, args.field or 2, None if region is None else region[:n], None if region is None else region[n:]
    )
    return dict({"subcommand": "smith", "flow": spec.name, "action": action.to_signed()}, **rep.to_json())


COMMANDS = {
    "conley": cmd_conley,
    "morse": cmd_morse,
    "compare": cmd_compare,
    "floer": cmd_floer,
    "dual": cmd_dual,
    "tensor": cmd_tensor,
    "certify": cmd_certify,
    "lattice": cmd_lattice,
    "smith": cmd_smith,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="floerkit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version="floerkit " + __version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="write the report here (atomically) instead of stdout")
        p.add_argument("--seed", type=int, default=0, help="recorded in the report; computations are deterministic")
        p.add_argument("--allow-unknown", action="store_true", help="accept unknown fields in input files")

    def flow_opts(p):
        p.add_argument("input", nargs="?", help="flow JSON file")
        p.add_argument("--catalog", help="built-in flow name")
        p.add_argument("--resolution", type=int, help="grid resolution for catalog flows")
        p.add_argument("--region", type=float, nargs="+", metavar="X", help="lower corner then upper corner of N")
        p.add_argument("--field", type=int, help="prime field (default: integers, or F_2 for smith)")

    def complex_opts(p, many=False):
        if many:
            p.add_argument("inputs", nargs="*", help="complex JSON files")
            p.add_argument("--catalog", action="append", help="catalog complex (repeatable)")
        else:
            p.add_argument("input", nargs="?", help="complex JSON file")
            p.add_argument("--catalog", help="catalog complex: S3, Sigma_2_3_5, Sigma_2_3_11")
        p.add_argument("--flavor", default="Pin2", choices=["S1", "Pin2"])
        p.add_argument("--field", type=int, help="coefficient field for S1 catalog complexes")
        p.add_argument("--window", type=int, nargs=2, metavar=("LO", "HI"))

    p = sub.add_parser("conley", help="index pair, verification and index homology of a flow")
    flow_opts(p)
    p.add_argument("--plot", help="write a CSV of cell-center coordinates and roles")
    common(p)

    p = sub.add_parser("morse", help="boundary-squared report and Morse homology")
    p.add_argument("input", nargs="?", help="Morse data JSON file")
    p.add_argument("--catalog", help="built-in example: non_compact, double_well")
    common(p)

    p = sub.add_parser("compare", help="Morse homology against Conley index homology")
    flow_opts(p)
    p.add_argument("--morse", help="Morse data JSON file")
    p.add_argument("--morse-catalog", help="built-in Morse example")
    common(p)

    for name, helptext in (("floer", "homology, invariants and Tate check"), ("dual", "dual complex"), ("certify", "non-splitting certificate")):
        p = sub.add_parser(name, help=helptext)
        complex_opts(p)
        common(p)

    p = sub.add_parser("tensor", help="complex of a disjoint union")
    complex_opts(p, many=True)
    common(p)

    p = sub.add_parser("lattice", help="Frøyshov inequality and 10/8 checks for intersection forms")
    p.add_argument("input", nargs="?", help="form JSON file")
    p.add_argument("--m", type=int, default=0, help="number of <-1> summands")
    p.add_argument("--block", action="append", help="catalog block name (repeatable), e.g. -E8")
    p.add_argument("--h", type=int, default=1, help="h of the boundary")
    p.add_argument("--bound", type=int, default=3, help="enumeration bound for general blocks")
    p.add_argument("--sweep", action="store_true", help="sweep J over 0, -E8, -E8+-E8 and m over 0..4")
    p.add_argument("--b2", type=int, help="also run the 10/8 bound with this b2")
    p.add_argument("--sigma", type=int, help="signature for the 10/8 bound")
    common(p)

    p = sub.add_parser("smith", help="Smith inequality for a symmetric flow")
    flow_opts(p)
    p.add_argument("--action", help="1-based signed axes, e.g. --action=-1,2")
    common(p)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = COMMANDS[args.command](args)
    except FloerkitError as e:
        sys.stdout.write(dumps({"error": e.to_dict()}))
        return 1
    report["seed"] = args.seed
    text = dumps(report)
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
