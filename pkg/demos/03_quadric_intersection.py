"""Quantum Steenrod operations on the intersection of two quadrics in P^5.

This monotone 6-manifold has even cohomology spanned by 1, h_2, h_4, h_6 and
a Novikov variable of degree 4.  Mod 2 the divisor acts classically and the
interesting contribution q^2 appears in QSt(h_4).  Mod 3 the full 4x4
divisor operator is determined (no taint at all), and composing it gives
QSt of the higher classes.
"""

from qsteenrod import (
    builtin_ring,
    format_element,
    format_endo,
    qst,
    qst_auto,
    solve_qsigma,
)


def main():
    print(__doc__)
    ring = builtin_ring("quadric_intersection", 2)
    print("mod 2:")
    for cls in ("h_2", "h_4"):
        r = qst(cls, ring)
        print("  QSt(%s) = %s" % (cls, format_element(r.element)))
    out, taint, route = qst_auto("h_6", ring)
    print("  QSt(h_6) = %s   (route: %s)" % (format_element(out), route))
    assert not taint
    print()

    ring3 = builtin_ring("quadric_intersection", 3)
    endo, report = solve_qsigma("h_2", ring3)
    print("mod 3, the full divisor operator (no undetermined slots):")
    print(format_endo(endo))
    assert not report.taint
    print()
    for cls in ("h_2", "h_4", "h_6"):
        out, taint, route = qst_auto(cls, ring3)
        print("  QSt(%s) = %s" % (cls, format_element(out)))
        assert not taint
    print()
    print("QSt(h_4) and QSt(h_6) come from the generator strategy: peel the")
    print("divisor off (h_4 = h_2*h_2 - q, h_6 = h_2*h_4 + q h_2) and push")
    print("through the covariant-constancy relation.")


if __name__ == "__main__":
    main()
