"""Independent cross-check of the analytic reduction.

Each layer is split into n sublayers and the transverse stress T22 is kept
as an independent piecewise-linear unknown (two coefficients per sublayer).
Per unit length of beam, the mixed quadratic functional

    Pi = integral over the thickness of width * G,
    G  = 1/2 Q11 S11^2 - e31 E3 S11 - 1/2 eps33 E3^2
         - (T22 - Q12 S11 + e32 E3)^2 / (2 Q22)

is the partial Legendre transform of the sectional energy in S22, so its
stationary point over the T22 unknowns reproduces the closures:

    NS  : T22 = 0 everywhere (no unknowns)
    ND  : unconstrained stationarity  ->  S22 = 0
    NSR : stationarity subject to  int T22 dz = int z T22 dz = 0, imposed
          through two explicit Lagrange multipliers; the multipliers are
          the section-wide transverse strain coefficients (a, b)

The Hessian of the stationary value over (eps, kappa, V_t) is the coupled
constitutive matrix; its electrical block is the negative of the
capacitance block, matching the storage convention of reduce_section.

Sublayer quantities are integrated in coordinates centered on each
sublayer, which keeps the T22 blocks diagonal and avoids the cancellation
that plain z-moments suffer for thin sublayers far from the midplane.

Shares no assembly code with section.reduce_section; for the layerwise
linear fields of this model the two agree to round-off at any n.
"""

from __future__ import annotations

import numpy as np

from .section import Closure, Section, SectionConstitutive, TransverseField


def _sublayer_data(section: Section, n: int):
    """Flatten the stack into n sublayers per layer with material columns."""
    if n < 1:
        raise ValueError(f"sublayer count must be >= 1, got {n}")
    z = section.z_interfaces
    n_t = section.n_terminals
    n_u = 2 + n_t
    centers, halves = [], []
    cols = {k: [] for k in ("Q11", "Q12", "Q22", "e31", "e32", "eps33")}
    ev = []   # E3 coefficient row over the unit states, poling frame
    for i, layer in enumerate(section.layers):
        dz = layer.thickness / n
        term = section.terminal_of(i)
        row = np.zeros(n_u)
        if term is not None:
            row[2 + term] = -layer.poling / layer.thickness
        for k in range(n):
            centers.append(z[i] + (k + 0.5) * dz)
            halves.append(dz / 2.0)
            for name in cols:
                cols[name].append(getattr(layer.material, name))
            ev.append(row)
    data = {name: np.array(vals) for name, vals in cols.items()}
    data["zc"] = np.array(centers)
    data["h"] = 2.0 * np.array(halves)
    data["ev"] = np.array(ev)
    return data, n_u


def _assemble(section: Section, closure: Closure, n: int):
    """Eliminate the T22 unknowns; return the Hessian and NSR multipliers."""
    data, n_u = _sublayer_data(section, n)
    w = section.width
    zc, h, ev = data["zc"], data["h"], data["ev"]
    q11, q12, q22 = data["Q11"], data["Q12"], data["Q22"]
    e31, e32, eps33 = data["e31"], data["e32"], data["eps33"]
    ns = len(h)

    mu0 = h                  # centered moments: int 1, int zeta^2
    mu2 = h ** 3 / 12.0
    v0 = np.zeros(n_u); v0[0] = 1.0
    v1 = np.zeros(n_u); v1[1] = 1.0
    # S11 = a0 + a1*zeta with a0 = eps + kappa*zc, a1 = kappa
    a0 = v0[None, :] + zc[:, None] * v1[None, :]          # (ns, n_u)
    # R = -Q12 S11 + e32 E3 = r0 + r1*zeta
    r0 = e32[:, None] * ev - q12[:, None] * a0
    r1 = -q12[:, None] * np.broadcast_to(v1, (ns, n_u))

    # direct (eps, kappa, V) quadratic part of the functional, times width
    e_blk = np.einsum("s,si,sj->ij", w * q11 * mu0, a0, a0)
    e_blk += w * np.sum(q11 * mu2) * np.outer(v1, v1)
    cross = np.einsum("s,si,sj->ij", w * e31 * mu0, ev, a0)
    e_blk -= cross + cross.T
    e_blk -= np.einsum("s,si,sj->ij", w * eps33 * mu0, ev, ev)
    e_blk -= np.einsum("s,si,sj->ij", w / q22 * mu0, r0, r0)
    e_blk -= np.einsum("s,si,sj->ij", w / q22 * mu2, r1, r1)

    if closure is Closure.NS:
        return e_blk, None

    # T22 blocks: A diagonal in centered coordinates, B the cross term,
    # C the two resultant constraints (both scaled by width so that the
    # NSR multipliers come out as the plain strain coefficients)
    a_diag = -(w / q22)[:, None] * np.stack([mu0, mu2], axis=1)      # (ns, 2)
    b_blk = -(w / q22)[:, None, None] * np.stack([mu0[:, None] * r0,
                                                  mu2[:, None] * r1], axis=1)  # (ns, 2, n_u)
    bab = np.einsum("sai,sa,saj->ij", b_blk, 1.0 / a_diag, b_blk)
    if closure is Closure.ND:
        return e_blk - bab, None

    c_blk = np.zeros((ns, 2, 2))      # (ns, dof, constraint)
    c_blk[:, 0, 0] = w * mu0
    c_blk[:, 0, 1] = w * mu0 * zc
    c_blk[:, 1, 1] = w * mu2
    bac = np.einsum("sai,sa,sac->ic", b_blk, 1.0 / a_diag, c_blk)
    cac = np.einsum("sac,sa,sad->cd", c_blk, 1.0 / a_diag, c_blk)
    multipliers = -np.linalg.solve(cac, bac.T)       # (2, n_u)
    return e_blk - bab + bac @ np.linalg.solve(cac, bac.T), multipliers.T


def discretized_oracle(section: Section, closure, n: int) -> SectionConstitutive:
    """Constitutive matrix from the discretized stationarity problem."""
    closure = Closure.coerce(closure)
    hessian, _ = _assemble(section, closure, n)
    full = hessian.copy()
    full[2:, 2:] *= -1.0
    return SectionConstitutive(matrix=full, n_terminals=section.n_terminals,
                               closure=closure, width=section.width)


def oracle_transverse_multipliers(section: Section, n: int) -> TransverseField:
    """NSR multipliers per unit state; dual check against nsr_transverse_field."""
    _, multipliers = _assemble(section, Closure.NSR, n)
    return TransverseField(coefficients=multipliers)
