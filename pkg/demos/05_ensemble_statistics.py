#!/usr/bin/env python3
"""Ensemble statistics: entropy is physics, uncertainty is bookkeeping.

A heterogeneous preparation is a weighted set of state operators.  Two very
different numbers live on it:

  <s>   the expected entropy, a weighted average of a *physical* property
        of the member states, and
  I     the statistical uncertainty -c sum w ln w, which measures only the
        heterogeneity of the weights and knows nothing about the states.

The sharpest case: a mixture of two pure states has <s> = 0 with I > 0,
while the point measure at the maximally mixed qubit has I = 0 with
<s> = ln 2.  The demo also runs maximum-uncertainty inference and evolves a
measure under the nonlinear dynamics (weights ride along unchanged; the
expected energy is conserved).
"""

import numpy as np

from seaqt import ensemble as en
from seaqt import sea
from seaqt import states as st


def run():
    print("Statistical-weight measures: entropy vs uncertainty")
    print("----------------------------------------------------")

    h = np.diag([0.0, 1.0])

    mixture_of_pure = en.measure([(0.3, st.pure_state([1, 0])),
                                  (0.7, st.pure_state([0, 1]))])
    dirac_at_mixed = en.dirac(st.validate(np.eye(2) / 2))
    print("measure                      <s>          I")
    for name, mu in (("0.3/0.7 over two pure", mixture_of_pure),
                     ("point measure at I/2", dirac_at_mixed)):
        print(f"{name:27s}  {en.expected_entropy(mu):.6f}     "
              f"{en.statistical_uncertainty(mu):.6f}")
    distinct = (en.expected_entropy(mixture_of_pure) < 1e-12
                and en.statistical_uncertainty(mixture_of_pure) > 0.6
                and en.statistical_uncertainty(dirac_at_mixed) == 0.0)
    print("")

    print("maximum-uncertainty inference over a known spectrum")
    states = [st.pure_state([1, 0]), st.pure_state([0, 1])]
    mu_star = en.maxent_known_spectrum(states, 0.25, h)
    weights = {round(st.mean(h, s), 3): w for w, s in mu_star.support}
    print(f"target <H> = 0.25 over levels (0, 1) -> weights "
          f"(q0, q1) = ({weights[0.0]:.6f}, {weights[1.0]:.6f})")
    maxent_ok = abs(weights[0.0] - 0.75) <= 1e-10
    print("")

    print("moments of the measure")
    mu = en.measure([(0.5, st.pure_state([1, 0])),
                     (0.5, st.validate(np.eye(2) / 2))])
    trace_moments, entropy_moments = en.measure_moments(mu, 3, g=st.entropy)
    print(f"sum w Tr(rho^n), n = 1..3: {[round(v, 6) for v in trace_moments]}")
    print(f"sum w s(rho)^n,  n = 1..3: {[round(v, 6) for v in entropy_moments]}")
    moments_ok = abs(trace_moments[1] - 0.75) <= 1e-12
    print("")

    print("evolution: weights ride along, expected energy is conserved")
    model = sea.validate_model(sea.SingleConstituentModel(H=h, tau=1.0))
    mu0 = en.measure([(0.4, st.random_full_rank(2, seed=1)),
                      (0.6, st.random_full_rank(2, seed=2))])
    e0 = en.mean_observable(mu0, h)
    s_before = en.expected_entropy(mu0)
    evolved = en.evolve_measure(mu0, lambda m: sea.sea_rhs(m, model), t_max=4.0)
    e1 = en.mean_observable(evolved, h)
    s_after = en.expected_entropy(evolved)
    print(f"expected energy:  before = {e0:.9f}, after = {e1:.9f} "
          f"(drift {abs(e1 - e0):.2e})")
    print(f"expected entropy: before = {s_before:.6f}, after = {s_after:.6f}")
    print(f"uncertainty unchanged: {en.statistical_uncertainty(evolved):.6f} "
          f"vs {en.statistical_uncertainty(mu0):.6f}")
    evolve_ok = abs(e1 - e0) <= 1e-7 and s_after >= s_before - 1e-10
    print("")

    ok = distinct and maxent_ok and moments_ok and evolve_ok
    print("Ensemble statistics CHECK:", "PASS" if ok else "FAIL")
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(run())
