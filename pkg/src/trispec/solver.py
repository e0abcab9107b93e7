"""Spectral-Galerkin solver for the mixed boundary value problem on a triangle."""
from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import asdict, dataclass, field

import numpy as np
import scipy.linalg

from .assembly import (
    AssembledSystem,
    boundary_vector,
    load_vector,
    mass_matrix,
    stiffness_matrix,
)
from .basis import Basis, BasisKind
from .exceptions import FactorizationError, WellPosednessError
from .mapping import TriangleMap, general_forward, general_inverse
from .polyquad import gauss_rule
from .problems import Problem
from .singular import SingularTable, cached_table

LINF_GRID = 200


def assemble_system(
    problem: Problem,
    n: int,
    kind=BasisKind.MODAL,
    table: SingularTable | None = None,
    tri: TriangleMap | None = None,
) -> AssembledSystem:
    """Assemble ``(grad u, grad v) + gamma (u, v) = (I_N f, v) + <g, v>_N``.

    The source enters through its interpolant at the mapped LGL points,
    integrated exactly against each basis function.

    Functions that do not vanish on the legs x = 0, y = 0 (xi = -1 or
    eta = -1 on the square) are marked for elimination.
    """
    basis = Basis(BasisKind(kind), n)
    tri = tri or TriangleMap.reference()
    table = table or cached_table(2 * n)
    mask = basis.dirichlet_mask.copy()
    if problem.gamma == 0 and not mask.any():
        raise WellPosednessError("pure Neumann problem with gamma = 0 is singular")
    return AssembledSystem(
        n=n,
        basis=basis,
        mass=mass_matrix(basis, tri),
        stiffness=stiffness_matrix(basis, tri, table=table),
        load=load_vector(problem.f, basis, tri),
        boundary=boundary_vector(problem.g, basis, tri),
        dirichlet_mask=mask,
        gamma=problem.gamma,
        tri=tri,
    )


@dataclass
class SpectralSolution:
    n: int
    basis: Basis
    coeffs: np.ndarray
    tri: TriangleMap = field(default_factory=TriangleMap.reference)
    residual: float = 0.0

    @property
    def grid(self) -> np.ndarray:
        return self.coeffs.reshape(self.n + 1, self.n + 1)

    def eval_square(self, xi, eta):
        return self.basis.evaluate(self.grid, xi, eta)

    def __call__(self, x, y):
        return evaluate(self, self.tri, x, y)


def solve(system: AssembledSystem) -> SpectralSolution:
    """Cholesky solve of the reduced system; eliminated entries are exactly 0."""
    mat, rhs = system.reduced()
    try:
        factor = scipy.linalg.cho_factor(mat)
    except np.linalg.LinAlgError as exc:
        raise FactorizationError(f"reduced matrix is not positive definite: {exc}") from exc
    x = scipy.linalg.cho_solve(factor, rhs)
    scale = np.max(np.abs(rhs))
    residual = float(np.max(np.abs(mat @ x - rhs)) / scale) if scale > 0 else 0.0
    coeffs = np.zeros(system.basis.size)
    coeffs[system.free] = x
    return SpectralSolution(system.n, system.basis, coeffs, system.tri or TriangleMap.reference(), residual)


def evaluate(sol: SpectralSolution, tri: TriangleMap, x, y):
    """Solution values at points (x, y) of the closed triangle."""
    xi, eta = general_inverse(tri, x, y)
    return sol.eval_square(xi, eta)


def error_norms(sol: SpectralSolution, exact, m_quad: int | None = None, linf_grid: int = LINF_GRID):
    """(L2, Linf) errors against ``exact(x, y)``.

    L2 uses an ``m_quad``-point Gauss rule per direction on the square with
    the Jacobian weight ``F chi / 8``; Linf is the maximum over the image of
    a uniform (linf_grid+1)^2 tensor grid on the closed square.
    """
    m_quad = m_quad or sol.n + 10
    tri = sol.tri
    rule = gauss_rule(m_quad)
    z, w = rule.nodes, rule.weights
    xi, eta = np.meshgrid(z, z, indexing="ij")
    x, y = general_forward(tri, xi, eta)
    diff = sol.basis.evaluate_grid(sol.grid, z, z) - exact(x, y)
    weight = tri.F / 8 * (2 - xi - eta) / 2 * np.outer(w, w)
    l2 = float(np.sqrt(np.sum(weight * diff**2)))

    s = np.linspace(-1.0, 1.0, linf_grid + 1)
    xi, eta = np.meshgrid(s, s, indexing="ij")
    x, y = general_forward(tri, xi, eta)
    linf = float(np.max(np.abs(sol.basis.evaluate_grid(sol.grid, s, s) - exact(x, y))))
    return l2, linf


@dataclass
class ConvergenceRow:
    N: int
    l2: float
    linf: float
    assemble_s: float
    solve_s: float


@dataclass
class ConvergenceReport:
    problem: str
    basis: str
    rows: list = field(default_factory=list)

    FIELDS = ("N", "l2", "linf", "assemble_s", "solve_s")

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.FIELDS)
        for r in self.rows:
            writer.writerow([r.N] + [format(getattr(r, k), ".17g") for k in self.FIELDS[1:]])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {"problem": self.problem, "basis": self.basis, "rows": [asdict(r) for r in self.rows]}
        return json.dumps(doc, indent=2) + "\n"

    def slope(self, column: str = "l2") -> float:
        """Least-squares slope of log(error) against log(N)."""
        n = np.log([r.N for r in self.rows])
        e = np.log([getattr(r, column) for r in self.rows])
        return float(np.polyfit(n, e, 1)[0])


def convergence_study(
    problem: Problem, n_list, kind=BasisKind.MODAL, table: SingularTable | None = None, timings: bool = True
) -> ConvergenceReport:
    """Solve for every N in ``n_list`` and record errors and timings.

    With ``timings=False`` the timing columns are written as 0 so repeated
    runs give identical reports.
    """
    n_list = list(n_list)
    if not n_list or sorted(n_list) != n_list:
        raise ValueError("n_list must be nonempty and ascending")
    if problem.exact is None:
        raise ValueError("convergence study needs an exact solution")
    table = table or cached_table(2 * max(n_list))
    report = ConvergenceReport(problem.name, BasisKind(kind).value)
    for n in n_list:
        t0 = time.perf_counter()
        system = assemble_system(problem, n, kind, table)
        t1 = time.perf_counter()
        sol = solve(system)
        t2 = time.perf_counter()
        l2, linf = error_norms(sol, problem.exact)
        row = ConvergenceRow(n, l2, linf, t1 - t0 if timings else 0.0, t2 - t1 if timings else 0.0)
        report.rows.append(row)
    return report
