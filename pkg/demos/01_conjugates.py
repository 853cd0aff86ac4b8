"""Cost functions and their Legendre conjugates.

The closed-form family c_{A,alpha} is quadratic up to A and grows like a
power alpha beyond it, glued so the slope is continuous.  Its conjugate is
the member with the dual exponent beta (1/alpha + 1/beta = 1), and the
numeric transform reproduces that duality to high accuracy.
"""

import numpy as np

from isocert.convex import (
    CostFunction,
    check_condition_H,
    double_conjugate,
    dual_cost,
    eval_cost,
    legendre_transform,
)


def main():
    cost = CostFunction.closed_form(A=1.0, alpha=3.0)
    dual = dual_cost(cost)
    print(f"cost: quadratic below {cost.A:g}, exponent {cost.alpha:g} above")
    print(f"dual: quadratic below {dual.A:g}, exponent {dual.alpha:g} above")

    xs = np.linspace(0.0, 10.0, 2000)
    numeric = legendre_transform(cost, xs).values
    exact = eval_cost(dual, xs)
    rel = np.max(np.abs(numeric - exact) / (1.0 + np.abs(exact)))
    print(f"numeric conjugate vs closed form: max rel err {rel:.3e}")

    back, _ = double_conjugate(cost, primal_grid=xs)
    err = np.max(np.abs(back.values - eval_cost(cost, xs)))
    print(f"double conjugate recovers the cost: max abs err {err:.3e}")

    growth = check_condition_H(cost, ks=(1.0, 2.0, 3.0))
    print("scaling ratios n(k) = sup c(kx)/c(x):",
          ", ".join(f"n({k:g})={v:.4g}" for k, v in zip(growth.ks, growth.n_primal)))
    print("same for the dual:",
          ", ".join(f"n({k:g})={v:.4g}" for k, v in zip(growth.ks, growth.n_dual)))
    print("all ratios finite:", growth.all_finite, "| superlinear:", cost.superlinearity_ok())


if __name__ == "__main__":
    main()
