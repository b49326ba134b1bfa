#!/usr/bin/env python3
"""Why a linear law cannot do the job: two classic failure modes.

(a) One fixed point per channel.  A linear channel relaxes *every* initial
    state to the same stationary state, so it cannot send each initial
    state to the stable equilibrium with its *own* mean energy.  The
    nonlinear law does exactly that.  (For Hilbert spaces beyond two
    dimensions no linear equation of motion can map all initial states to
    the correct maximum-entropy state; this scenario demonstrates the
    obstruction on a three-level system.)

(b) Infinite entropy production on singular states.  The linear rate grows
    like -ln p_min as the smallest eigenvalue p_min goes to zero, while the
    nonlinear rate stays bounded: p (ln p)^2 -> 0.
"""

import numpy as np

from seaqt import equilibrium as eq
from seaqt import integrate as ig
from seaqt import lindblad as lb
from seaqt import sea
from seaqt import states as st


def thermal_channel(h, beta_channel=1.0):
    """Detailed-balance jumps relaxing to one fixed Gibbs state."""
    e = np.real(np.diag(h))
    jumps = []
    dim = len(e)
    for i in range(dim):
        for j in range(dim):
            if i == j:
                continue
            gap = e[j] - e[i]
            rate = 1.0 if gap > 0 else np.exp(beta_channel * gap)
            a = np.zeros((dim, dim), dtype=complex)
            a[i, j] = np.sqrt(rate)  # moves population j -> i
            jumps.append(a)
    return lb.lindblad_model(-h, jump_ops=tuple(jumps))


def run():
    print("Linear channel vs nonlinear entropy ascent")
    print("------------------------------------------")

    h = np.diag([0.0, 1.0, 2.0])
    channel = thermal_channel(h, beta_channel=1.0)
    model = sea.validate_model(sea.SingleConstituentModel(H=h, tau=1.0))
    constants = eq.constant_set([h])

    print("(a) one fixed point per channel vs an energy-resolved family")
    print("initial <H>   linear final <H>   sea final <H>   sea gap to own Gibbs")
    cfg = ig.IntegratorConfig(t_max=80.0, dt_max=2.0, rel_tol=1e-11,
                              abs_tol=1e-12, equilibrium_norm_tol=1e-10)
    energy_pinned = True
    linear_energies = []
    for seed in (3, 4, 5):
        rho0 = st.random_full_rank(3, seed=seed)
        e0 = st.mean(h, rho0)
        lin = ig.integrate(rho0, lambda m: lb.kl_rhs(m, channel), cfg)
        nonlin = ig.integrate(rho0, lambda m: sea.sea_rhs(m, model), cfg)
        e_lin = float(np.trace(h @ lin.final.rho).real)
        e_sea = float(np.trace(h @ nonlin.final.rho).real)
        target = eq.gibbs_state(constants, eq.solve_multipliers(constants, [e0]))
        gap = st.distance(st.validate(nonlin.final.rho), target)
        linear_energies.append(e_lin)
        energy_pinned &= gap <= 1e-6 and abs(e_sea - e0) <= 1e-6
        print(f"{e0:10.6f}   {e_lin:15.6f}   {e_sea:13.6f}   {gap:.3e}")
    linear_collapses = max(linear_energies) - min(linear_energies) <= 1e-6
    print(f"linear channel forgets the initial energy: {linear_collapses}")
    print(f"nonlinear law conserves it and hits its own Gibbs state: "
          f"{energy_pinned}")
    print("")

    print("(b) entropy production near a singular state")
    h2 = np.diag([0.0, 1.0])
    decay = np.zeros((2, 2), dtype=complex)
    decay[0, 1] = 1.0
    dmodel = lb.lindblad_model(-h2, jump_ops=(decay,))
    sea2 = sea.validate_model(sea.SingleConstituentModel(H=h2, tau=1.0))
    occupations = [1e-4, 1e-6, 1e-8]
    linear_rates = lb.singular_divergence_demo(dmodel, occupations, fill_state=1)
    sea_rates = [sea.entropy_production_rate(
        st.validate(np.diag([p, 1.0 - p])), sea2) for p in occupations]
    print("p_min      linear rate     nonlinear rate")
    for p, rl, rs in zip(occupations, linear_rates, sea_rates):
        print(f"{p:.0e}    {rl:12.6f}    {rs:14.6f}")
    _, slope, residual = lb.log_divergence_fit(occupations, linear_rates)
    print(f"linear fit rate ~ c1 + c2 (-ln p): c2 = {slope:.4f}, "
          f"relative misfit = {residual:.3f}")
    diverges = (linear_rates[0] < linear_rates[1] < linear_rates[2]
                and residual <= 0.2)
    bounded = max(sea_rates) < linear_rates[-1]
    print(f"linear rate diverges logarithmically: {diverges}")
    print(f"nonlinear rate stays bounded:         {bounded}")
    print("")

    ok = linear_collapses and energy_pinned and diverges and bounded
    print("Linear-vs-nonlinear CHECK:", "PASS" if ok else "FAIL")
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(run())
