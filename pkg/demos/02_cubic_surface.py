"""Quantum Steenrod operations on the cubic surface, mod 2 and mod 3.

Mod 2 everything is determined: starting from QSt of the anticanonical
class, the covariant-constancy relation pushes the operator through the
whole even cohomology, and the generator strategy shows the point class has
purely classical quantum Steenrod operation, QSt(h_4) = t^2 h_4.

Mod 3 the single Novikov variable leaves one slot per column undetermined
at order q^3 (where the divisor derivation vanishes mod 3); the solver
reports those slots as taint instead of guessing.
"""

from qsteenrod import (
    builtin_ring,
    connection_apply,
    format_element,
    qst,
    qst_via_generators,
    solve_qsigma,
)


def main():
    print(__doc__)
    ring = builtin_ring("cubic_surface", 2)
    r = qst("h_2", ring)
    print("mod 2:")
    print("  QSt(h_2)              =", format_element(r.element))
    v1 = connection_apply("h_2", r.element, ring)
    print("  QSigma_{h_2}(h_2)     =", format_element(v1))
    v2 = connection_apply("h_2", v1, ring)
    print("  QSigma_{h_2}(h_2*h_2) =", format_element(v2))
    out, taint = qst_via_generators([(1, 0, ("h_2", "h_2")), (1, 1, ("h_2",))], ring)
    print("  QSt(h_4)              =", format_element(out), " (via h_4 = h_2*h_2 + q h_2)")
    assert not taint
    print()

    ring3 = builtin_ring("cubic_surface", 3)
    endo, report = solve_qsigma("h_2", ring3)
    r3 = qst("h_2", ring3)
    print("mod 3:")
    print("  QSt(h_2) =", format_element(r3.element), " (purely classical)")
    print("  undetermined slots of QSigma_{h_2}:")
    for line in report.taint_text:
        print("   ", line)
    print()
    print("The q^3 t slot in the column of h_2 is exactly the term the single")
    print("Novikov variable cannot see; every other slot is pinned by the")
    print("recurrence, the t^0 seeds, or degree pruning.")


if __name__ == "__main__":
    main()
