"""Three independent routes to the quantum Steenrod operation on the sphere.

The divisor operator QSigma_h on H*(S^2) can be obtained by

  1. solving the covariant-constancy recurrence order by order in q,
  2. evaluating the closed-form factorial sums, and
  3. solving the quantum differential equation over Q with exact rationals,
     truncating below q^p, and reducing mod p.

All three agree bit-for-bit, for every odd prime tried here.
"""

from qsteenrod import (
    builtin_ring,
    format_endo,
    format_element,
    qst,
    reduce_mod_p,
    s2_closed_form,
    solve_qsigma,
    xi_matrix,
    xi_series,
)


def main():
    print(__doc__)
    xi = xi_series(6)
    print("The rational solution xi of (t q d/dq)^2 xi = q xi starts with")
    print("  coefficients of q^k t^-2k:",
          [str(xi.coefficient(k, -2 * k)) for k in range(5)])
    print()

    for p in (3, 5, 7, 11):
        ring = builtin_ring("s2", p)
        solved, report = solve_qsigma("h", ring)
        closed = s2_closed_form(p)
        reduced = reduce_mod_p(xi_matrix(p - 1), p)
        assert solved == closed == reduced
        print("p = %2d: solver == closed form == rational reduction  (taint: %r)"
              % (p, list(report.taint)))
    print()

    p = 3
    ring = builtin_ring("s2", p)
    solved, _ = solve_qsigma("h", ring)
    print("At p = 3 the operator is (entries grouped from -> to):")
    print(format_endo(solved))
    print()
    r = qst("h", ring)
    print("and the quantum Steenrod operation of the point class is")
    print("  QSt(h) =", format_element(r.element))
    print()
    print("Its q^0 part -t^2 h is the classical Steenrod action, and its t^0")
    print("part q h is the third quantum power of h, as it must be.")


if __name__ == "__main__":
    main()
