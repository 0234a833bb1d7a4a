"""Command-line client for the service.

By default every command runs against an in-process instance of the FastAPI
app (no network); pass --server URL to talk to a running instance instead.
Output is deterministic: the same command and inputs produce byte-identical
text or JSON.

Exit codes: 0 success, 1 unexpected failure, 2 unparseable input, and one
documented code per domain error class (see errors.py); verify-paper exits
19 when a golden check fails.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys

import httpx

from .errors import VERIFICATION_FAILED_EXIT
from .rayclass import DEFAULT_RESIDUE_CAP

DEFAULT_FACTOR_CAP = 10 ** 6


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="k3cm",
        description=(
            "arithmetic invariants of CM K3 surfaces over imaginary quadratic "
            "fields: types, discriminant ideals, ray class groups, fields of "
            "definition"
        ),
    )
    parser.add_argument(
        "--format", choices=("text", "json"), default="text", help="output format"
    )
    parser.add_argument(
        "--server", default=None, help="base URL of a running service (default: in-process)"
    )
    parser.add_argument(
        "--residue-cap",
        type=int,
        default=DEFAULT_RESIDUE_CAP,
        help=f"residue enumeration cap (default {DEFAULT_RESIDUE_CAP})",
    )
    parser.add_argument(
        "--factor-cap",
        type=int,
        default=DEFAULT_FACTOR_CAP,
        help=f"Pollard-rho iteration cap (default {DEFAULT_FACTOR_CAP})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="full report for a surface")
    group = analyze.add_mutually_exclusive_group(required=True)
    group.add_argument("--gram", help='transcendental lattice, e.g. "8,0;0,8"')
    group.add_argument("--type", dest="type_text", help='type, e.g. "d=-7; I=1:[1,0,1]; alpha=1"')

    rayclass = sub.add_parser("rayclass", help="ray class group of a modulus")
    rayclass.add_argument("-d", type=int, required=True, help="fundamental discriminant")
    rayclass.add_argument("-I", dest="modulus", required=True, help='modulus, e.g. "(8)" or "1:[1,0,8]"')

    enumerate_ = sub.add_parser("enumerate", help="types up to a discriminant norm bound")
    enumerate_.add_argument("-d", type=int, required=True)
    enumerate_.add_argument("--norm-bound", type=int, default=100)

    sub.add_parser("verify-paper", help="run the golden verification suite")

    search = sub.add_parser("search", help="finiteness search over small fields")
    search.add_argument("-N", type=int, default=1, help="bound on h * phi ratio")
    search.add_argument("--disc-bound", type=int, default=200)

    pointcount = sub.add_parser("pointcount", help="point counts over finite fields")
    pointcount.add_argument("-q", type=int, required=True, help="prime power")
    pointcount.add_argument("--rho", type=int, default=None)
    pointcount.add_argument("--deg-e", type=int, default=None)

    growth = sub.add_parser("growth", help="degree growth against the phi ratio")
    growth.add_argument("-d", type=int, required=True)
    growth.add_argument("--norm-bound", type=int, default=1000)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)

    return parser


def build_request(args) -> tuple[str, dict]:
    if args.command == "analyze":
        payload = {"residue_cap": args.residue_cap, "factor_cap": args.factor_cap}
        if args.gram is not None:
            payload["gram"] = args.gram
        else:
            payload["type"] = args.type_text
        return "/analyze", payload
    if args.command == "rayclass":
        return "/rayclass", {
            "d": args.d,
            "modulus": args.modulus,
            "residue_cap": args.residue_cap,
            "factor_cap": args.factor_cap,
        }
    if args.command == "enumerate":
        return "/enumerate", {
            "d": args.d,
            "norm_bound": args.norm_bound,
            "residue_cap": args.residue_cap,
        }
    if args.command == "verify-paper":
        return "/verify", {}
    if args.command == "search":
        return "/search", {"max_ratio": args.N, "disc_bound": args.disc_bound}
    if args.command == "pointcount":
        payload = {"q": args.q}
        if args.rho is not None:
            payload["rho"] = args.rho
        if args.deg_e is not None:
            payload["deg_e"] = args.deg_e
        return "/pointcount", payload
    if args.command == "growth":
        return "/growth", {
            "d": args.d,
            "norm_bound": args.norm_bound,
            "residue_cap": args.residue_cap,
        }
    raise AssertionError(f"unhandled command {args.command}")


def post(path: str, payload: dict, server: str | None) -> httpx.Response:
    if server is not None:
        with httpx.Client(base_url=server, timeout=600.0) as client:
            return client.post(path, json=payload)

    async def _call():
        from .service.app import app

        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(
            transport=transport, base_url="http://k3cm.local", timeout=600.0
        ) as client:
            return await client.post(path, json=payload)

    return asyncio.run(_call())


# ----- text rendering -----


def render_text(body: dict, out) -> None:
    schema = body.get("schema", "")
    renderer = {
        "analyze@1": _render_analyze,
        "rayclass@1": _render_rayclass,
        "enumerate@1": _render_enumerate,
        "verify@1": _render_verify,
        "search@1": _render_search,
        "pointcount@1": _render_pointcount,
        "growth@1": _render_growth,
    }.get(schema)
    if renderer is None:
        json.dump(body, out, indent=2, sort_keys=True)
        out.write("\n")
        return
    renderer(body, out)


def _conjugation_text(divisors, matrix) -> str:
    if matrix is None:
        return "not defined (modulus not conjugation-stable)"
    parts = []
    rank = len(divisors)
    for j in range(rank):
        terms = []
        for i in range(rank):
            coeff = matrix[i][j] % divisors[i]
            if coeff == 0:
                continue
            name = f"g{i + 1}"
            terms.append(name if coeff == 1 else f"{coeff}*{name}")
        parts.append(f"g{j + 1} -> " + (" + ".join(terms) if terms else "0"))
    return ", ".join(parts) if parts else "trivial group"


def _group_text(divisors) -> str:
    return " + ".join(f"Z/{d}" for d in divisors) if divisors else "trivial"


def _render_analyze(body, out):
    field = body["field"]
    out.write(f"field: {field['label']}  (d = {field['d']}, h = {field['class_number']}, "
              f"|mu| = {field['roots_of_unity']})\n")
    out.write(f"type: {body['type']['text']}\n")
    gram = body["gram"]
    out.write(f"transcendental lattice: {';'.join(','.join(str(x) for x in row) for row in gram)}\n")
    disc = body["discriminant_ideal"]
    out.write(f"discriminant ideal: {disc['text']}  (norm {disc['norm']}, "
              f"meets Z in {disc['smallest_integer']}Z)\n")
    out.write(f"big discriminant: {'yes' if body['big_discriminant'] else 'no'}"
              f"  (unit kernel: {{{', '.join(body['unit_kernel'])}}})\n")
    rc = body["ray_class_group"]
    out.write(f"ray class group mod D: {_group_text(rc['divisors'])} (order {rc['order']})\n")
    out.write(f"conjugation: {_conjugation_text(rc['divisors'], rc['conjugation'])}\n")
    if rc.get("fixed_subgroup_order") is not None:
        out.write(f"conjugation-fixed subgroup: order {rc['fixed_subgroup_order']}\n")
    out.write(f"class field degree over E: {body['class_field_degree']}\n")
    verdict = body["model_over_E"]
    if verdict["applicable"]:
        answer = "yes" if verdict["admits_model"] else "no"
        out.write(f"model over E with full Picard rank: {answer}  ({verdict['reason']})\n")
    else:
        out.write(f"model over E: not applicable  ({verdict['reason']})\n")
    formula = body.get("degree_formula")
    if formula:
        out.write(
            "degree formula factors: "
            f"h = {formula['h']}, phi_E(D) = {formula['phi_disc']}, "
            f"m = {formula['m']}, phi(m) = {formula['phi_m']}, "
            f"unit indices = ({formula['norm_unit_index']}, {formula['unit_congruence_index']}), "
            f"e = {formula['e_factor']}, residual H1 = {formula['residual_h1']}\n"
        )


def _render_rayclass(body, out):
    out.write(f"modulus: {body['modulus']}  (norm {body['modulus_norm']})\n")
    out.write(f"Cl_I = {_group_text(body['divisors'])} (order {body['order']})\n")
    if body.get("generators"):
        out.write(f"generator ideals: {', '.join(body['generators'])}\n")
    out.write(f"(O/I)^x order: {body['residue_unit_order']}\n")
    out.write(f"conjugation: {_conjugation_text(body['divisors'], body.get('conjugation'))}\n")
    if body.get("class_field_degree") is not None:
        out.write(f"fixed subgroup order: {body['fixed_subgroup_order']}; "
                  f"|Cl'| = {body['class_field_degree']}\n")


def _render_enumerate(body, out):
    out.write(f"types over d = {body['d']} with Nm(D) <= {body['norm_bound']}:\n")
    for t in body["types"]:
        flag = "big" if t["big_discriminant"] else "NOT big"
        out.write(f"  {t['text']}  Nm(D) = {t['disc_norm']}  [{flag}]\n")
    out.write(f"total: {len(body['types'])}\n")


def _render_verify(body, out):
    for report in body["reports"]:
        status = "PASS" if report["passed"] else "FAIL"
        out.write(f"[{status}] {report['title']}\n")
        for check in report["checks"]:
            mark = "ok" if check["passed"] else "FAIL"
            line = f"  [{mark}] {check['name']}"
            if check["source"] == "info":
                line += f": {check['computed']} (informational)"
            else:
                line += f": expected {check['expected']}, got {check['computed']} ({check['source']})"
            if check["note"]:
                line += f"  # {check['note']}"
            out.write(line + "\n")
    out.write("all checks passed\n" if body["passed"] else "verification FAILED\n")


def _render_search(body, out):
    out.write(
        f"fields with h <= {body['max_ratio']} and |d| <= {body['disc_bound']}, "
        f"and ideals with h*phi_E/phi <= {body['max_ratio']}:\n"
    )
    for entry in body["fields"]:
        out.write(f"d = {entry['d']} (h = {entry['class_number']}):\n")
        if not entry["rows"]:
            out.write("  no qualifying discriminant ideals\n")
        for row in entry["rows"]:
            out.write(
                f"  level {row['level']}: D = {row['ideal']}, norm {row['disc_norm']}, "
                f"ratio {row['ratio']}, types realizing: {row['type_count']}\n"
            )


def _render_pointcount(body, out):
    if body["mode"] == "supersingular":
        out.write(f"|X(F_{body['q']})| = {body['count']}  (trivial Frobenius action)\n")
    else:
        out.write(
            f"point count bounds over F_{body['q']}: [{body['minimum']}, {body['maximum']}]; "
            f"smooth-point lifting criterion applies: {'yes' if body['hensel_ok'] else 'no'}\n"
        )


def _render_growth(body, out):
    out.write(f"degree growth over d = {body['d']} up to Nm(D) <= {body['norm_bound']}:\n")
    for row in body["rows"]:
        out.write(
            f"  {row['type_text']}  Nm(D) = {row['disc_norm']}  degree = {row['degree']}  "
            f"phi ratio = {row['phi_ratio']}  degree/(phi ratio) = {row['ratio']}\n"
        )
    if body["min_ratio"] is not None:
        out.write(f"observed ratio window: [{body['min_ratio']}, {body['max_ratio']}]\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        import uvicorn

        from .service.app import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0
    path, payload = build_request(args)
    try:
        response = post(path, payload, args.server)
    except httpx.HTTPError as exc:
        print(f"error: cannot reach service: {exc}", file=sys.stderr)
        return 1
    if response.status_code in (400, 422):
        body = response.json()
        if body.get("schema") == "error@1":
            print(f"error ({body['error']}): {body['detail']}", file=sys.stderr)
            return body["code"]
        # request-model validation failure
        print(f"error (ParseError): {json.dumps(body)}", file=sys.stderr)
        return 2
    if response.status_code != 200:
        print(f"error: service returned {response.status_code}", file=sys.stderr)
        return 1
    body = response.json()
    if args.format == "json":
        print(json.dumps(body, indent=2, sort_keys=True))
    else:
        render_text(body, sys.stdout)
    if args.command == "verify-paper" and not body.get("passed", False):
        return VERIFICATION_FAILED_EXIT
    return 0


if __name__ == "__main__":
    sys.exit(main())
