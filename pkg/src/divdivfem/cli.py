"""Command-line verification front end.

Subcommands: dims, unisolvence, poly-complex, global-complex,
green-identities, export-basis.  Each run emits one JSON document
(``{"reports": [...], "all_pass": bool}``) to stdout or ``--out`` and exits
0 iff every selected check passed, 1 on a failed check, 2 on usage errors.
Independent checks may be scheduled on DIVDIVFEM_THREADS workers; reports
are ordered by claim id, so the output is identical for any thread count.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from .elements import box as boxmod
from .elements import tet as tetmod
from .export import export_basis, import_basis, verify_duality
from .mesh.complex import build_box_mesh, build_tet_mesh, single_tet_mesh, two_tet_mesh
from .randgen import RatRandom
from .verify.checks import (
    check_exactness_global,
    check_identity_suite,
    check_kernel_characterization,
    check_polynomial_derham,
    check_polynomial_divdiv,
)
from .verify.report import Timer, VerificationReport
from .verify.surjectivity import check_divdiv_surjectivity_constructive


def _thread_count() -> int:
    try:
        return max(1, int(os.environ.get("DIVDIVFEM_THREADS", "1")))
    except ValueError:
        return 1


def _run_jobs(jobs):
    """Run independent zero-argument check jobs; canonical report order."""
    workers = _thread_count()
    if workers == 1 or len(jobs) <= 1:
        reports = [job() for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(lambda j: j(), jobs))
    return sorted(reports, key=lambda r: r.claim)


def _emit(reports, out_path) -> int:
    doc = {"reports": [r.to_dict() for r in reports], "all_pass": all(r.passed for r in reports)}
    text = json.dumps(doc, indent=2)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if doc["all_pass"] else 1


def _mesh_from_spec(grid: str, spec: str, flip=False):
    if grid == "tet":
        if spec == "single":
            return single_tet_mesh(), "single"
        if spec == "two":
            return two_tet_mesh(), "two"
        nx, ny, nz = (int(p) for p in spec.lower().split("x"))
        return build_tet_mesh(nx, ny, nz, flip_orientation=flip), spec
    if spec == "single":
        spec = "1x1x1"
    if spec == "two":
        spec = "2x1x1"
    nx, ny, nz = (int(p) for p in spec.lower().split("x"))
    return build_box_mesh(nx, ny, nz, flip_orientation=flip), spec


def _cmd_dims(args) -> int:
    rep = VerificationReport(f"dims:{args.grid}:k={args.k}")
    with Timer() as t:
        k = args.k
        if args.grid == "box":
            dims = {
                fam: boxmod.box_family_dim(fam, k) for fam in ("Sigma", "U", "V")
            }
            dims["Q"] = (k - 1) ** 3
            dims["bubbles"] = {fam: boxmod.bubble_dim_box(fam, k) for fam in ("Sigma", "U", "V")}
            K = boxmod.CuboidElement((0, 0, 0), (1, 1, 1))
            for fam in ("Sigma", "U", "V"):
                built = boxmod.shape_space_box(fam, k, K).dim
                rep.require(built == dims[fam], (fam, built, dims[fam]))
        else:
            dims = {fam: tetmod.tet_family_dim(fam, k) for fam in ("Sigma", "U", "V", "Q")}
            K = tetmod.TetElement([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])
            built = {
                "Sigma": tetmod.tet_symmetric_space(k, K).dim,
                "U": tetmod.tet_traceless_space(k + 1, K).dim,
                "V": tetmod.tet_vector_space(k + 2, K).dim,
                "Q": tetmod.tet_scalar_space(k - 2, K).dim,
            }
            for fam, d in built.items():
                rep.require(d == dims[fam], (fam, d, dims[fam]))
        rep.dims = dims
    rep.millis = t.millis
    return _emit([rep], args.out)


def _element_for(grid, family, k, geometry, seed):
    fam = {"sigma": "Sigma", "u": "U", "v": "V", "q": "Q"}[family.lower()]
    rng = RatRandom(seed)
    if grid == "box":
        if geometry == "unit":
            K = boxmod.CuboidElement((0, 0, 0), (1, 1, 1))
        else:
            lo, hi = rng.cuboid_corners()
            K = boxmod.CuboidElement(lo, hi)
        return boxmod.element_def(fam, k, K)
    if geometry == "unit":
        K = tetmod.TetElement([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])
    else:
        K = tetmod.TetElement(rng.tet().vertices)
    return tetmod.element_def(fam, k, K)


def _cmd_unisolvence(args) -> int:
    rep = VerificationReport(
        f"unisolvence:{args.grid}:{args.family.lower()}:k={args.k}:{args.cell}"
    )
    with Timer() as t:
        d = _element_for(args.grid, args.family, args.k, args.cell, args.seed)
        cert = d.unisolvence()
        rep.dims = {"dofs": len(d.dofs), "dim": d.dim}
        rep.ranks = {"rank": cert["rank"] if cert["rank"] is not None else d.dim}
        rep.require(cert["square"], "dof count differs from the dimension")
        rep.require(cert["det_nonzero"], "dof matrix is singular")
    rep.millis = t.millis
    return _emit([rep], args.out)


def _cmd_poly_complex(args) -> int:
    jobs = []
    if args.degrees:
        degs = tuple(int(p) for p in args.degrees.split(","))
        jobs.append(lambda d=degs: check_polynomial_derham(degrees=d))
    for k in args.k:
        if "derham" in args.which:
            jobs.append(lambda kk=k: check_polynomial_derham(kk))
        if "divdiv" in args.which:
            jobs.append(lambda kk=k: check_polynomial_divdiv(kk))
    return _emit(_run_jobs(jobs), args.out)


def _cmd_global_complex(args) -> int:
    mesh, label = _mesh_from_spec(args.grid, args.mesh, flip=args.flip_orientation)
    jobs = [lambda: check_exactness_global(mesh, args.k, label)]
    if args.full:
        jobs.append(lambda: check_kernel_characterization(mesh, args.k))
        if args.grid == "tet":
            jobs.append(lambda: check_divdiv_surjectivity_constructive(mesh, args.k, label))
    return _emit(_run_jobs(jobs), args.out)


def _cmd_green(args) -> int:
    return _emit([check_identity_suite(count=args.count, seed=args.seed)], args.out)


def _cmd_export_basis(args) -> int:
    rep = VerificationReport(f"export-basis:{args.grid}:{args.family.lower()}:k={args.k}")
    with Timer() as t:
        data = export_basis(args.family, args.k, args.grid, path=args.path)
        rep.dims = {"fields": data["dim"]}
        fields = import_basis(data if args.path is None else args.path)
        rep.require(
            verify_duality(args.family, args.k, args.grid, fields),
            "duality re-check failed after round trip",
        )
    rep.millis = t.millis
    return _emit([rep], args.out)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="divdivfem",
        description="Exact rational verification of finite element divdiv complexes",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dims", help="dimension tables for one grid type and degree")
    p.add_argument("--grid", choices=("box", "tet"), required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_dims)

    p = sub.add_parser("unisolvence", help="certify one element's DOF matrix")
    p.add_argument("--grid", choices=("box", "tet"), required=True)
    p.add_argument("--family", choices=("sigma", "u", "v"), required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--cell", choices=("unit", "random"), default="unit")
    p.add_argument("--seed", type=int, default=20240803)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_unisolvence)

    p = sub.add_parser("poly-complex", help="polynomial complex exactness")
    p.add_argument("--k", type=int, nargs="*", default=[3])
    p.add_argument("--degrees", help="k1,k2,k3 for the componentwise sequence")
    p.add_argument("--which", default="derham,divdiv")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_poly_complex)

    p = sub.add_parser("global-complex", help="assembled complex exactness")
    p.add_argument("--grid", choices=("box", "tet"), required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mesh", default="single", help="single | two | NXxNYxNZ")
    p.add_argument("--full", action="store_true", help="add kernel and surjectivity checks")
    p.add_argument("--flip-orientation", action="store_true")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_global_complex)

    p = sub.add_parser("green-identities", help="fixed-seed exact identity suite")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=20240805)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_green)

    p = sub.add_parser("export-basis", help="write a nodal basis as exact JSON")
    p.add_argument("--grid", choices=("box", "tet"), required=True)
    p.add_argument("--family", choices=("sigma", "u", "v", "q"), required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--path", help="output file (defaults to stdout-only report)")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_export_basis)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, ArithmeticError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
