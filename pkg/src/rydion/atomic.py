"""Field-free electronic structure of alkaline-earth ions.

Solves the radial Schroedinger equation for the parametric model potential
(modified Coulomb + induced core polarization + regularized spin-orbit term)
and evaluates radial electric-multipole matrix elements from the numerical
wavefunctions. All quantities in Hartree atomic units unless noted.

The solver works on the log-transformed equation: with x = ln r and
u(x) = Phi(r) / sqrt(r) the radial equation becomes u'' = W(x) u with

    W(x) = (l + 1/2)^2 + 2 r^2 (V(r) - E),

which a fixed-step Numerov recursion integrates stably over the huge radial
dynamic range of Rydberg states. Eigenvalues are located by bisection on the
interior node count of the outward solution and refined by matching outward
and inward log-derivatives at the outer classical turning point.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

import numpy as np

from .angular import angular_matrix_element, clebsch_gordan  # noqa: F401 (re-export)
from .constants import FINE_STRUCTURE, au_to_meters
from .errors import ConvergenceError
from .species import IonSpecies

L_LETTERS = "SPDFGHIKLMNOQRTUV"


@dataclass(frozen=True, order=True)
class ElectronicState:
    """Fine-structure state |n, l, s=1/2, j, m_j>."""

    n: int
    l: int
    j: float
    m_j: float
    s: float = 0.5

    def __post_init__(self):
        if self.n < 1 or not (0 <= self.l < self.n):
            raise ValueError(f"require 1 <= n and 0 <= l < n, got n={self.n}, l={self.l}")
        if abs(self.s - 0.5) > 1e-12:
            raise ValueError("only s = 1/2 is supported")
        if not (abs(self.l - self.s) - 1e-9 <= self.j <= self.l + self.s + 1e-9):
            raise ValueError(f"j={self.j} violates |l-s| <= j <= l+s for l={self.l}")
        if abs(self.m_j) > self.j + 1e-9:
            raise ValueError(f"|m_j|={abs(self.m_j)} exceeds j={self.j}")
        if abs(2 * self.j - round(2 * self.j)) > 1e-9 or round(2 * self.j) % 2 == 0:
            raise ValueError(f"j={self.j} must be half-odd-integer for s=1/2")
        if abs(2 * self.m_j - round(2 * self.m_j)) > 1e-9:
            raise ValueError(f"m_j={self.m_j} must be a half-integer")

    @property
    def label(self) -> str:
        frac = f"{int(round(2 * self.j))}/2"
        mj = f"{'+' if self.m_j >= 0 else '-'}{abs(int(round(2 * self.m_j)))}/2"
        return f"{self.n}{L_LETTERS[self.l]}{frac}({mj})"

    @classmethod
    def from_label(cls, term: str, m_j: float) -> "ElectronicState":
        """Parse e.g. ``"46S1/2"`` or ``"4D5/2"`` plus an explicit m_j."""
        i = 0
        while i < len(term) and term[i].isdigit():
            i += 1
        n = int(term[:i])
        l = L_LETTERS.index(term[i].upper())
        num, den = term[i + 1:].split("/")
        j = int(num) / int(den)
        return cls(n=n, l=l, j=j, m_j=m_j)

    @property
    def nodes(self) -> int:
        return self.n - self.l - 1


@dataclass(frozen=True)
class GridConfig:
    """Logarithmic radial grid; r_max defaults to 3 n (n+1) for singly
    charged ions (Zc = 2), scaled by 2/Zc otherwise so the forbidden-region
    buffer beyond the classical turning point ~ 2 n^2 / Zc stays equally wide.
    The default is also floored at 50 Bohr radii; for low-lying states the
    bare 3 n (n+1) acts as a hard wall that shifts eigenvalues at the 1e-3
    level, while the floor leaves every Rydberg grid untouched.
    """

    r_min: float = 1e-4
    r_max: float | None = None
    points: int = 20_000

    def radii(self, n: int, zc: int = 2) -> np.ndarray:
        r_max = self.r_max
        if r_max is None:
            r_max = max(3.0 * n * (n + 1) * 2.0 / zc, 50.0)
        if r_max <= self.r_min:
            raise ValueError("r_max must exceed r_min")
        return np.exp(np.linspace(math.log(self.r_min), math.log(r_max), self.points))


@dataclass(frozen=True)
class RadialWavefunction:
    """Normalized reduced radial function Phi(r) = r R(r) with its eigenenergy."""

    state: ElectronicState
    species_name: str
    grid: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    energy: float
    node_count: int
    match_mismatch: float = 0.0

    def norm(self) -> float:
        return float(np.trapezoid(self.values**2, self.grid))

    def to_csv(self, path) -> None:
        header = "r_bohr,phi"
        np.savetxt(path, np.column_stack([self.grid, self.values]),
                   delimiter=",", header=header, comments="")


# ---------------------------------------------------------------------------
# model potential


def _modified_charge(r, species: IonSpecies, l: int):
    ch = species.channel(l)
    return (species.Zc
            + (species.Z - species.Zc) * np.exp(-ch.k1 * r)
            + ch.k2 * r * np.exp(-ch.k3 * r))


def model_potential(r, l: int, species: IonSpecies):
    """Non-relativistic part V_C(r) + V_P(r) in Hartree, r in Bohr radii.

    The j-dependent spin-orbit term is added separately inside the solver.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ValueError("model_potential requires r > 0")
    ch = species.channel(l)
    v_c = -_modified_charge(r, species, l) / r
    v_p = -species.alpha_d / (2.0 * r**4) * (1.0 - np.exp(-((r / ch.r_c) ** 6)))
    out = v_c + v_p
    return float(out) if out.ndim == 0 else out


def _potential_derivative(r: np.ndarray, l: int, species: IonSpecies) -> np.ndarray:
    """d(V_C + V_P)/dr, analytic."""
    ch = species.channel(l)
    zn = _modified_charge(r, species, l)
    dzn = (-(species.Z - species.Zc) * ch.k1 * np.exp(-ch.k1 * r)
           + ch.k2 * np.exp(-ch.k3 * r) * (1.0 - ch.k3 * r))
    dv_c = zn / r**2 - dzn / r
    x = (r / ch.r_c) ** 6
    ex = np.exp(-x)
    dv_p = 2.0 * species.alpha_d * (1.0 - ex) / r**5 - 3.0 * species.alpha_d * x * ex / r**5
    return dv_c + dv_p


def spin_orbit_potential(r, l: int, j: float, species: IonSpecies):
    """Regularized relativistic spin-orbit term V_R(r) in Hartree."""
    r = np.asarray(r, dtype=float)
    ls = 0.5 * (j * (j + 1) - l * (l + 1) - 0.75)
    if ls == 0.0:
        return np.zeros_like(r)
    v_nr = model_potential(r, l, species)
    n_reg = (1.0 - FINE_STRUCTURE**2 * v_nr / 2.0) ** 2
    return (FINE_STRUCTURE**2 / 2.0) * _potential_derivative(r, l, species) / (r * n_reg) * ls


# ---------------------------------------------------------------------------
# Numerov machinery


def _numerov_outward(w: list[float], h2: float, ratio0: float, stop: int) -> int:
    """Sweep indices 0..stop inclusive and count sign changes of u.

    Where the Numerov factor 1 - h^2 W / 12 turns negative (possible only in
    deeply forbidden regions during wide energy brackets) the recursion
    fabricates oscillations, so sign changes are only counted while the local
    factors are positive.
    """
    u0 = 1e-140
    u1 = u0 * ratio0
    c = h2 / 12.0
    nodes = 0
    f0 = 1.0 - c * w[0]
    f1 = 1.0 - c * w[1]
    for i in range(2, stop + 1):
        f2 = 1.0 - c * w[i]
        u2 = ((12.0 - 10.0 * f1) * u1 - f0 * u0) / f2
        if f2 > 0.0 and f1 > 0.0 and (u2 < 0.0) != (u1 < 0.0) and u1 != 0.0:
            nodes += 1
        if abs(u2) > 1e250:
            u1 *= 1e-250
            u2 *= 1e-250
        u0, u1 = u1, u2
        f0, f1 = f1, f2
    return nodes


def _deriv5(u: np.ndarray, i: int, h: float) -> float:
    """O(h^4) centered first derivative."""
    return (8.0 * (u[i + 1] - u[i - 1]) - (u[i + 2] - u[i - 2])) / (12.0 * h)


def _numerov_outward_full(w: list[float], h2: float, ratio0: float, stop: int) -> np.ndarray:
    u = np.empty(stop + 1)
    u[0] = 1e-140
    u[1] = u[0] * ratio0
    c = h2 / 12.0
    f = [1.0 - c * wi for wi in w[: stop + 1]]
    for i in range(2, stop + 1):
        u[i] = ((12.0 - 10.0 * f[i - 1]) * u[i - 1] - f[i - 2] * u[i - 2]) / f[i]
        if abs(u[i]) > 1e250:
            u[: i + 1] *= 1e-250
    return u


def _numerov_inward_full(w: list[float], h2: float, h: float, stop: int) -> np.ndarray:
    """Sweep from the last grid point down to index `stop`; array aligned to grid."""
    n = len(w)
    u = np.zeros(n)
    u[n - 1] = 1e-140
    # trapezoidal WKB exponent for the decaying branch seed
    kappa = 0.5 * (math.sqrt(max(w[n - 1], 1e-12)) + math.sqrt(max(w[n - 2], 1e-12)))
    u[n - 2] = u[n - 1] * math.exp(kappa * h)
    c = h2 / 12.0
    for i in range(n - 3, stop - 1, -1):
        f2 = 1.0 - c * w[i]
        u[i] = ((12.0 - 10.0 * (1.0 - c * w[i + 1])) * u[i + 1]
                - (1.0 - c * w[i + 2]) * u[i + 2]) / f2
        if abs(u[i]) > 1e250:
            u[i:] *= 1e-250
    return u


class _RadialProblem:
    def __init__(self, state: ElectronicState, species: IonSpecies,
                 grid: GridConfig, spin_orbit: bool):
        self.state = state
        self.r = grid.radii(state.n, species.Zc)
        self.x = np.log(self.r)
        self.h = float(self.x[1] - self.x[0])
        self.h2 = self.h * self.h
        v = model_potential(self.r, state.l, species)
        if spin_orbit:
            v = v + spin_orbit_potential(self.r, state.l, state.j, species)
        self.two_r2 = 2.0 * self.r**2
        self.w0 = (state.l + 0.5) ** 2 + self.two_r2 * v
        self.ratio0 = float((self.r[1] / self.r[0]) ** (state.l + 0.5))

    def w_list(self, energy: float) -> list[float]:
        return (self.w0 - self.two_r2 * energy).tolist()

    def count_nodes(self, energy: float) -> int:
        w = self.w_list(energy)
        return _numerov_outward(w, self.h2, self.ratio0, len(w) - 1)

    def match_index(self, energy: float) -> int:
        w = self.w0 - self.two_r2 * energy
        allowed = np.nonzero(w < 0.0)[0]
        if allowed.size == 0 or allowed[-1] < 5 or allowed[-1] > len(w) - 5:
            raise ConvergenceError(
                f"atomic: grid does not bracket the classical turning point "
                f"for {self.state.label} at E={energy:.6e}")
        return int(allowed[-1])

    def mismatch(self, energy: float) -> float:
        """Scaled log-derivative difference of outward and inward branches."""
        w = self.w_list(energy)
        m = self.match_index(energy)
        uo = _numerov_outward_full(w, self.h2, self.ratio0, m + 2)
        # match at the largest recent antinode to avoid dividing by ~0
        lo = max(2, m - 200)
        m_use = lo + int(np.argmax(np.abs(uo[lo: m + 1])))
        if m_use > m:
            m_use = m
        ui = _numerov_inward_full(w, self.h2, self.h, m_use - 2)
        duo = _deriv5(uo, m_use, self.h)
        dui = _deriv5(ui, m_use, self.h)
        return duo / uo[m_use] - dui / ui[m_use]

    def assemble(self, energy: float) -> tuple[np.ndarray, int, float]:
        w = self.w_list(energy)
        m = self.match_index(energy)
        uo = _numerov_outward_full(w, self.h2, self.ratio0, m + 2)
        lo = max(2, m - 200)
        m_use = lo + int(np.argmax(np.abs(uo[lo: m + 1])))
        if m_use > m:
            m_use = m
        ui = _numerov_inward_full(w, self.h2, self.h, m_use - 2)
        u = np.empty(len(w))
        scale = uo[m_use] / ui[m_use]
        u[:m_use] = uo[:m_use]
        u[m_use:] = ui[m_use:] * scale
        duo = _deriv5(uo, m_use, self.h)
        dui = _deriv5(ui, m_use, self.h)
        mism = abs(duo - dui * scale) / max(abs(duo), abs(dui * scale), 1e-300)
        phi = u * np.sqrt(self.r)
        nrm = math.sqrt(np.trapezoid(phi**2, self.r))
        phi /= nrm
        sign_ref = phi[np.nonzero(np.abs(phi) > 0.1 * np.max(np.abs(phi)))[0][0]]
        if sign_ref < 0:
            phi = -phi
        interior = phi[1:-1]
        big = np.abs(interior) > 1e-8 * np.max(np.abs(interior))
        sgn = np.sign(interior[big])
        nodes = int(np.count_nonzero(sgn[1:] * sgn[:-1] < 0))
        return phi, nodes, mism


_cache: dict[tuple, RadialWavefunction] = {}
_cache_lock = threading.Lock()


def solve_radial(state: ElectronicState, species: IonSpecies,
                 grid: GridConfig | None = None, spin_orbit: bool = True,
                 energy_window: tuple[float, float] | None = None) -> RadialWavefunction:
    """Solve for the bound state with the node count n - l - 1.

    Bisection first isolates the eigenvalue by interior node count of the
    outward Numerov solution, then refines on the matching condition at the
    outer turning point. Results are memoized per (state, species, grid).
    """
    grid = grid or GridConfig()
    key = (state, species.name, grid, spin_orbit, energy_window)
    with _cache_lock:
        hit = _cache.get(key)
    if hit is not None:
        return hit

    prob = _RadialProblem(state, species, grid, spin_orbit)
    target = state.nodes

    if energy_window is not None:
        e_lo, e_hi = energy_window
    else:
        e_lo = -0.75 * species.Z**2
        e_hi = -1e-9
    if prob.count_nodes(e_lo) > target or prob.count_nodes(e_hi) <= target:
        raise ConvergenceError(
            f"atomic: no eigenvalue with {target} nodes bracketed in "
            f"[{e_lo:.3e}, {e_hi:.3e}] for {state.label}",
            bracket=(e_lo, e_hi))

    # phase 1: bisection on node count -> bracket containing exactly our state
    lo, hi = e_lo, e_hi
    for _ in range(200):
        if hi - lo < max(1e-14, 1e-11 * abs(lo)):
            break
        mid = 0.5 * (lo + hi)
        if prob.count_nodes(mid) <= target:
            lo = mid
        else:
            hi = mid

    # phase 2: bisection on the matching mismatch inside the bracket
    try:
        g_lo = prob.mismatch(lo)
        g_hi = prob.mismatch(hi)
        if g_lo * g_hi < 0:
            a, b, ga = lo, hi, g_lo
            for _ in range(200):
                mid = 0.5 * (a + b)
                gm = prob.mismatch(mid)
                if ga * gm <= 0:
                    b = mid
                else:
                    a, ga = mid, gm
                if b - a < max(1e-16, 1e-13 * abs(a)):
                    break
            energy = 0.5 * (a + b)
        else:
            energy = 0.5 * (lo + hi)
    except ConvergenceError:
        energy = 0.5 * (lo + hi)

    phi, nodes, mism = prob.assemble(energy)
    if nodes != target:
        raise ConvergenceError(
            f"atomic: converged solution for {state.label} has {nodes} nodes, "
            f"expected {target} (E={energy:.8e})", residual=mism)
    result = RadialWavefunction(state=state, species_name=species.name,
                                grid=prob.r, values=phi, energy=energy,
                                node_count=nodes, match_mismatch=mism)
    with _cache_lock:
        _cache[key] = result
    return result


def clear_cache() -> None:
    with _cache_lock:
        _cache.clear()


# ---------------------------------------------------------------------------
# matrix elements


def radial_matrix_element(a: ElectronicState, b: ElectronicState, k: int,
                          species: IonSpecies, grid: GridConfig | None = None,
                          spin_orbit: bool = True) -> float:
    """<a| r^k |b> in Bohr-radii^k on the union of the two stored grids.

    k = 1 gives electric-dipole, k = 2 electric-quadrupole radial integrals.
    Symmetric under exchange of a and b by construction.
    """
    if k not in (1, 2):
        raise ValueError(f"k must be 1 or 2, got {k}")
    # canonical order keeps the quadrature identical under a <-> b
    first, second = sorted((a, b))
    wa = solve_radial(first, species, grid, spin_orbit)
    wb = solve_radial(second, species, grid, spin_orbit)
    lo = max(wa.grid[0], wb.grid[0])
    hi = min(wa.grid[-1], wb.grid[-1])
    if hi <= lo:
        raise ValueError("radial grids of the two states do not overlap")
    r = np.union1d(wa.grid, wb.grid)
    r = r[(r >= lo) & (r <= hi)]
    fa = np.interp(r, wa.grid, wa.values)
    fb = np.interp(r, wb.grid, wb.values)
    return float(np.trapezoid(r**k * fa * fb, r))


def radial_matrix_element_si(a: ElectronicState, b: ElectronicState, k: int,
                             species: IonSpecies, grid: GridConfig | None = None,
                             spin_orbit: bool = True) -> float:
    """Same as :func:`radial_matrix_element` but in meters^k."""
    return au_to_meters(radial_matrix_element(a, b, k, species, grid, spin_orbit), k)
