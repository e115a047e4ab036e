"""Layered cross-sections and their coupled 1D constitutive reduction.

The beam kinematics carries a single axial strain S11(z) = eps + z*kappa
plus one voltage per electrode terminal; the transverse strain S22 is not
a kinematic descriptor and has to be closed by an extra hypothesis. Each
closure picks S22 from a different trial family and makes the sectional
energy stationary over it:

    ND  : S22 = 0                       (rigid transverse section)
    NS  : S22 pointwise stationary  ->  T22 = 0 layer by layer
    NSR : S22 = a + b*z section-wide, stationarity == the null transverse
          resultants  int T22 dz = 0  and  int z*T22 dz = 0

The trial families are nested ({0} < {a + b*z} < pointwise), which orders
the blocked capacitances C_ND <= C_NSR <= C_NS.

Sign conventions (single source of truth for the whole package):

* z = 0 at the geometric mid-height of the stack; layers listed bottom to
  top; positive kappa bends the beam concave toward +z.
* N = width * int T11 dz,  M = width * int z*T11 dz.
* Every electroded layer sees the through-thickness field E3 = -V/h in its
  own poling frame (a -z-poled layer is hooked up with flipped leads), so
  in stack coordinates E3 = -poling * V / h.
* Terminal charge per unit beam length q = -width * sum_k poling_k *
  mean(D3_k), the mean taken over the layer thickness with D3 in the
  poling frame. This makes the capacitance block positive definite.
* The assembled constitutive matrix is stored in the layout
      [N; M; q] = [[Kmm, Kme], [Kme^T, Cq]] [eps; kappa; V]
  which is symmetric: the actuation coupling (force per volt) equals the
  sensing coupling (charge per unit strain) entry for entry.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .materials import PlaneMaterial, as_plane, builtin_materials


class LayupError(ValueError):
    """Invalid layer stack or layup description file."""


class Closure(str, Enum):
    """Transverse closure hypothesis."""

    ND = "nd"     # null transverse deformation, S22 = 0
    NS = "ns"     # null transverse stress, T22 = 0 pointwise
    NSR = "nsr"   # null transverse stress resultants

    @classmethod
    def coerce(cls, value) -> "Closure":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise LayupError(f"unknown closure model {value!r} (expected nd, ns or nsr)") from None


@dataclass(frozen=True)
class Layer:
    """One layer of the stack, bottom face first.

    poling is +1/-1 for the orientation of the poling axis along +z, or 0
    for a layer with no poling direction. A poling of 0 requires a material
    with zero piezoelectric coupling; an electroded layer must be poled
    (any dielectric qualifies, coupled or not).
    """

    material: PlaneMaterial
    thickness: float
    poling: int = 0
    electroded: bool = False

    def __post_init__(self):
        if not self.thickness > 0.0:
            raise LayupError(f"layer thickness must be positive, got {self.thickness}")
        if self.poling not in (-1, 0, 1):
            raise LayupError(f"poling must be -1, 0 or +1, got {self.poling}")
        if self.poling == 0 and self.material.has_coupling:
            raise LayupError(f"layer of {self.material.name} has piezoelectric coupling "
                             "and needs a poling direction")
        if self.electroded and self.poling == 0:
            raise LayupError("electroded layer needs a poling direction "
                             "(electroded elastic layer)")


@dataclass(frozen=True)
class Section:
    """Ordered layer stack with width and electrode wiring.

    wiring 'parallel' joins all electroded layers into one terminal pair;
    'independent' gives every electroded layer its own terminal (ordered
    bottom to top).
    """

    layers: tuple
    width: float
    wiring: str = "parallel"

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        if len(self.layers) == 0:
            raise LayupError("section needs at least one layer")
        if not self.width > 0.0:
            raise LayupError(f"width must be positive, got {self.width}")
        if self.wiring not in ("parallel", "independent"):
            raise LayupError(f"unknown wiring {self.wiring!r}")

    @property
    def thickness(self) -> float:
        return sum(l.thickness for l in self.layers)

    @property
    def z_interfaces(self) -> tuple:
        z = [-self.thickness / 2.0]
        for l in self.layers:
            z.append(z[-1] + l.thickness)
        return tuple(z)

    @property
    def terminals(self) -> tuple:
        """Layer indices per terminal."""
        electroded = tuple(i for i, l in enumerate(self.layers) if l.electroded)
        if not electroded:
            return ()
        if self.wiring == "parallel":
            return (electroded,)
        return tuple((i,) for i in electroded)

    @property
    def n_terminals(self) -> int:
        return len(self.terminals)

    @property
    def mass_per_length(self) -> float:
        return self.width * sum(l.material.density * l.thickness for l in self.layers)

    def terminal_of(self, layer_index: int):
        for t, members in enumerate(self.terminals):
            if layer_index in members:
                return t
        return None


@dataclass(frozen=True)
class GeneralizedState:
    """Kinematic state of the 1D model: S11(z) = eps + z*kappa plus voltages."""

    eps: float = 0.0
    kappa: float = 0.0
    voltages: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "voltages", tuple(float(v) for v in self.voltages))


@dataclass(frozen=True)
class SectionConstitutive:
    """Assembled (2+T)x(2+T) coupled constitutive matrix.

    matrix rows/columns are ordered (eps, kappa, V_0, ..., V_{T-1}) against
    (N, M, q_0, ..., q_{T-1}). The matrix is stored exactly as assembled,
    without symmetrization; its symmetry is the reciprocity statement.
    """

    matrix: np.ndarray
    n_terminals: int
    closure: Closure
    width: float

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.shape != (2 + self.n_terminals,) * 2:
            raise LayupError(f"constitutive matrix has shape {m.shape}, "
                             f"expected {(2 + self.n_terminals,) * 2}")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)
        if np.min(np.linalg.eigvalsh(0.5 * (self.kmm + self.kmm.T))) <= 0.0:
            raise LayupError("mechanical stiffness block is not positive definite")
        if self.n_terminals and np.min(np.linalg.eigvalsh(0.5 * (self.cq + self.cq.T))) <= 0.0:
            raise LayupError("capacitance block is not positive definite")

    @property
    def kmm(self) -> np.ndarray:
        return self.matrix[:2, :2]

    @property
    def kme(self) -> np.ndarray:
        return self.matrix[:2, 2:]

    @property
    def cq(self) -> np.ndarray:
        return self.matrix[2:, 2:]

    @property
    def extension_stiffness(self) -> float:
        return self.matrix[0, 0]

    @property
    def coupling_stiffness(self) -> float:
        return self.matrix[0, 1]

    @property
    def bending_stiffness(self) -> float:
        return self.matrix[1, 1]

    @property
    def gm(self) -> np.ndarray:
        """Extension-voltage coupling, N/V, one entry per terminal."""
        return self.matrix[0, 2:]

    @property
    def gk(self) -> np.ndarray:
        """Bending-voltage coupling, N m/V, one entry per terminal."""
        return self.matrix[1, 2:]


@dataclass(frozen=True)
class TransverseField:
    """Section-wide transverse strain S22(z) = a + b*z of the NSR closure.

    coefficients[j] = (a, b) for the unit generalized state j, ordered
    (eps, kappa, V_0, ..., V_{T-1}).
    """

    coefficients: np.ndarray

    def for_state(self, state: GeneralizedState) -> tuple:
        u = np.concatenate(([state.eps, state.kappa], state.voltages))
        a, b = u @ self.coefficients
        return float(a), float(b)


@dataclass(frozen=True)
class StressProfile:
    """Layerwise-linear T11(z), T22(z) with sampled grid and T22 resultants.

    t11_coefficients[k] and t22_coefficients[k] hold (constant, slope) of
    layer k, stress in Pa evaluated at the global coordinate z. samples has
    one row (layer, z, T11, T22) per grid point. n2 and m2 are the exact
    transverse resultants per unit beam length, int T22 dz and int z T22 dz.
    """

    z_interfaces: tuple
    t11_coefficients: np.ndarray
    t22_coefficients: np.ndarray
    samples: np.ndarray
    n2: float
    m2: float


# ---------------------------------------------------------------------------
# assembly helpers

def _moments(z0: float, z1: float) -> tuple:
    """Exact integrals of 1, z, z^2 over a layer."""
    return z1 - z0, (z1 * z1 - z0 * z0) / 2.0, (z1 ** 3 - z0 ** 3) / 3.0


def _unit_states(n_terminals: int) -> int:
    return 2 + n_terminals


def _layer_fields(section: Section, state_index: int):
    """Per-layer (eps, kappa, E3) for one unit generalized state.

    E3 is the field in the layer's poling frame, -poling * V / thickness
    for the layer's own terminal voltage.
    """
    eps = 1.0 if state_index == 0 else 0.0
    kappa = 1.0 if state_index == 1 else 0.0
    e3 = []
    for i, layer in enumerate(section.layers):
        t = section.terminal_of(i)
        if t is not None and state_index == 2 + t:
            e3.append(-layer.poling / layer.thickness)
        else:
            e3.append(0.0)
    return eps, kappa, e3


def _nsr_system(section: Section):
    """Coefficient matrix of the two resultant conditions on S22 = a + b*z."""
    m = np.zeros((2, 2))
    z = section.z_interfaces
    for i, layer in enumerate(section.layers):
        m0, m1, m2 = _moments(z[i], z[i + 1])
        q22 = layer.material.Q22
        m += q22 * np.array([[m0, m1], [m1, m2]])
    return m


def _nsr_rhs(section: Section, eps: float, kappa: float, e3: list) -> np.ndarray:
    z = section.z_interfaces
    rhs = np.zeros(2)
    for i, layer in enumerate(section.layers):
        m0, m1, m2 = _moments(z[i], z[i + 1])
        p = layer.material
        rhs[0] += p.e32 * e3[i] * m0 - p.Q12 * (eps * m0 + kappa * m1)
        rhs[1] += p.e32 * e3[i] * m1 - p.Q12 * (eps * m1 + kappa * m2)
    return rhs


def nsr_transverse_field(section: Section) -> TransverseField:
    """Solve the 2x2 resultant-annihilation system per unit generalized state."""
    system = _nsr_system(section)
    rows = []
    for j in range(_unit_states(section.n_terminals)):
        eps, kappa, e3 = _layer_fields(section, j)
        rows.append(np.linalg.solve(system, _nsr_rhs(section, eps, kappa, e3)))
    return TransverseField(coefficients=np.array(rows))


def _transverse_strain(section: Section, closure: Closure, eps: float, kappa: float,
                       e3: list, nsr_ab=None) -> list:
    """Per-layer (s0, s1) coefficients of S22(z) = s0 + s1*z under the closure."""
    if closure is Closure.ND:
        return [(0.0, 0.0)] * len(section.layers)
    if closure is Closure.NS:
        out = []
        for i, layer in enumerate(section.layers):
            p = layer.material
            out.append(((p.e32 * e3[i] - p.Q12 * eps) / p.Q22, -p.Q12 * kappa / p.Q22))
        return out
    if nsr_ab is None:
        nsr_ab = np.linalg.solve(_nsr_system(section), _nsr_rhs(section, eps, kappa, e3))
    a, b = nsr_ab
    return [(a, b)] * len(section.layers)


def reduce_section(section: Section, closure) -> SectionConstitutive:
    """Assemble the coupled constitutive matrix under the given closure.

    Column j of the matrix is the response (N, M, q) to the unit generalized
    state j; the charge rows of the mechanical columns are assembled through
    the sensing route and the voltage columns through the actuation route,
    so the returned matrix is symmetric only by reciprocity, not by
    construction.
    """
    closure = Closure.coerce(closure)
    n_t = section.n_terminals
    n_u = _unit_states(n_t)
    z = section.z_interfaces
    w = section.width
    nsr_rows = nsr_transverse_field(section).coefficients if closure is Closure.NSR else None

    full = np.zeros((n_u, n_u))
    for j in range(n_u):
        eps, kappa, e3 = _layer_fields(section, j)
        s22 = _transverse_strain(section, closure, eps, kappa, e3,
                                 nsr_ab=None if nsr_rows is None else nsr_rows[j])
        n = m = 0.0
        q = np.zeros(n_t)
        for i, layer in enumerate(section.layers):
            p = layer.material
            s0, s1 = s22[i]
            m0, m1, m2 = _moments(z[i], z[i + 1])
            c0 = p.Q11 * eps + p.Q12 * s0 - p.e31 * e3[i]
            c1 = p.Q11 * kappa + p.Q12 * s1
            n += w * (c0 * m0 + c1 * m1)
            m += w * (c0 * m1 + c1 * m2)
            t = section.terminal_of(i)
            if t is not None:
                zbar = m1 / m0
                d3_mean = (p.e31 * (eps + kappa * zbar) + p.e32 * (s0 + s1 * zbar)
                           + p.eps33 * e3[i])
                q[t] += -w * layer.poling * d3_mean
        full[0, j] = n
        full[1, j] = m
        # mechanical columns carry the sensing sign; voltage columns the
        # charge per volt, so the electrical diagonal block is +Cq
        full[2:, j] = -q if j < 2 else q
    return SectionConstitutive(matrix=full, n_terminals=n_t, closure=closure, width=w)


def capacitance_per_length(constitutive: SectionConstitutive, condition: str,
                           terminal: int = 0) -> float:
    """Terminal capacitance per unit beam length, F/m.

    'blocked' is the constitutive coefficient Cq[t, t] (frozen generalized
    strains); 'free' releases the section at N = M = 0 and adds the
    mechanical-compliance contribution g^T Kmm^-1 g >= 0.
    """
    if not 0 <= terminal < constitutive.n_terminals:
        raise LayupError(f"terminal {terminal} out of range "
                         f"(section has {constitutive.n_terminals})")
    blocked = constitutive.cq[terminal, terminal]
    if condition == "blocked":
        return float(blocked)
    if condition == "free":
        g = constitutive.kme[:, terminal]
        return float(blocked + g @ np.linalg.solve(constitutive.kmm, g))
    raise LayupError(f"unknown capacitance condition {condition!r}")


def recover_stress_profile(section: Section, closure, state: GeneralizedState,
                           samples_per_layer: int = 11) -> StressProfile:
    """Layerwise-linear T11 and T22 fields for an imposed generalized state."""
    closure = Closure.coerce(closure)
    if len(state.voltages) != section.n_terminals:
        raise LayupError(f"state has {len(state.voltages)} voltages, "
                         f"section has {section.n_terminals} terminals")
    z = section.z_interfaces
    e3 = []
    for i, layer in enumerate(section.layers):
        t = section.terminal_of(i)
        volt = state.voltages[t] if t is not None else 0.0
        e3.append(-layer.poling * volt / layer.thickness)
    s22 = _transverse_strain(section, closure, state.eps, state.kappa, e3)

    t11 = np.zeros((len(section.layers), 2))
    t22 = np.zeros((len(section.layers), 2))
    rows = []
    for i, layer in enumerate(section.layers):
        p = layer.material
        s0, s1 = s22[i]
        t11[i] = (p.Q11 * state.eps + p.Q12 * s0 - p.e31 * e3[i],
                  p.Q11 * state.kappa + p.Q12 * s1)
        if closure is Closure.NS:
            # T22 = 0 is the definition of the closure, not a computed value
            t22[i] = (0.0, 0.0)
        else:
            t22[i] = (p.Q12 * state.eps + p.Q22 * s0 - p.e32 * e3[i],
                      p.Q12 * state.kappa + p.Q22 * s1)
        for zq in np.linspace(z[i], z[i + 1], samples_per_layer):
            rows.append((i, zq, t11[i, 0] + t11[i, 1] * zq, t22[i, 0] + t22[i, 1] * zq))

    n2, m2 = _t22_resultants(z, t22)
    return StressProfile(z_interfaces=z, t11_coefficients=t11, t22_coefficients=t22,
                         samples=np.array(rows), n2=n2, m2=m2)


def _t22_resultants(z_interfaces, t22_coefficients) -> tuple:
    n2 = m2 = 0.0
    for i, (c0, c1) in enumerate(t22_coefficients):
        m0, m1, m2_ = _moments(z_interfaces[i], z_interfaces[i + 1])
        n2 += c0 * m0 + c1 * m1
        m2 += c0 * m1 + c1 * m2_
    return float(n2), float(m2)


def transverse_resultants(profile: StressProfile) -> tuple:
    """Exact piecewise-linear integrals int T22 dz and int z T22 dz."""
    return _t22_resultants(profile.z_interfaces, profile.t22_coefficients)


@dataclass(frozen=True)
class ClosureComparison:
    """One closure's headline quantities for the comparison table."""

    closure: Closure
    capacitance: float                  # blocked constitutive capacitance, F/m
    capacitance_free: float             # released at N = M = 0, F/m
    extension_stiffness: float          # A, N
    bending_stiffness_short: float      # D condensed at N = 0, short circuit, N m^2
    bending_voltage_coupling: float     # gk of the first terminal, N m/V
    deviation_pct: float | None = None  # (model - reference) / reference * 100


@dataclass(frozen=True)
class ComparisonTable:
    rows: tuple
    reference_capacitance: float | None = None


def compare_closures(section: Section, reference_capacitance: float | None = None,
                     terminal: int = 0) -> ComparisonTable:
    """Evaluate all three closures on one section.

    The capacitance column holds the blocked (constitutive) capacitance of
    the given terminal; the percent deviation against an optional reference
    uses the declared convention (model - reference) / reference * 100.
    """
    rows = []
    for closure in (Closure.ND, Closure.NS, Closure.NSR):
        k = reduce_section(section, closure)
        if k.n_terminals:
            cap = capacitance_per_length(k, "blocked", terminal)
            cap_free = capacitance_per_length(k, "free", terminal)
            gk = float(k.gk[terminal])
        else:
            cap = cap_free = gk = 0.0
        a = k.extension_stiffness
        d_sc = k.bending_stiffness - k.coupling_stiffness ** 2 / a
        dev = None
        if reference_capacitance is not None:
            dev = (cap - reference_capacitance) / reference_capacitance * 100.0
        rows.append(ClosureComparison(closure=closure, capacitance=cap,
                                      capacitance_free=cap_free, extension_stiffness=a,
                                      bending_stiffness_short=d_sc,
                                      bending_voltage_coupling=gk, deviation_pct=dev))
    return ComparisonTable(rows=tuple(rows), reference_capacitance=reference_capacitance)


# ---------------------------------------------------------------------------
# layup files

_POLING = {"+z": 1, "-z": -1, "none": 0}


def build_section(layup: dict, materials: dict | None = None) -> Section:
    """Build a Section from a parsed layup description.

    Expected keys: width_mm, wiring ('parallel' | 'independent') and layers,
    a bottom-to-top list of {material, thickness_mm, poling, electroded}.
    Material names resolve against the built-in records plus the optional
    materials mapping.
    """
    records = builtin_materials()
    if materials:
        records.update(materials)
    try:
        width = float(layup["width_mm"]) * 1e-3
        wiring = layup.get("wiring", "parallel")
        entries = layup["layers"]
    except (KeyError, TypeError) as exc:
        raise LayupError(f"malformed layup description: {exc}") from exc
    if not entries:
        raise LayupError("layup has no layers")
    layers = []
    for entry in entries:
        try:
            name = entry["material"]
            thickness = float(entry["thickness_mm"]) * 1e-3
            poling_key = entry.get("poling", "none")
            electroded = bool(entry.get("electroded", False))
        except (KeyError, TypeError) as exc:
            raise LayupError(f"malformed layer entry: {exc}") from exc
        if name not in records:
            raise LayupError(f"unknown material {name!r}")
        if poling_key not in _POLING:
            raise LayupError(f"unknown poling {poling_key!r} (expected +z, -z or none)")
        layers.append(Layer(material=as_plane(records[name]), thickness=thickness,
                            poling=_POLING[poling_key], electroded=electroded))
    return Section(layers=tuple(layers), width=width, wiring=wiring)


def load_layup(path, material_db=None) -> Section:
    """Parse a layup JSON file, resolving materials against an optional database."""
    try:
        layup = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise LayupError(f"malformed layup file {path}: {exc}") from exc
    return build_section(layup, materials=material_db)
