"""The 8-cycle forces exact arithmetic in a quadratic field.

C_8 has eigenvalues 2, +-sqrt(2), 0, -2, so the Bose-Mesner data lives
in Q(q) with q^2 = 2.  Every scalar below is an exact pair a0 + a1*q;
nothing is floated.  The demo prints the idempotent coefficients, shows
a projector with irrational entries, and runs the split suite.
"""

from splitdec import (
    GroundField,
    distance_data,
    dual_data,
    graph_from_spec,
    intersection_numbers,
    required_field_b,
    scheme_data,
    split_decomposition,
    verify_split_suite,
)

g = graph_from_spec("cycle:8")
dd = distance_data(g)
inter = intersection_numbers(g, dd)
b = required_field_b(inter)
print(f"{g.name}: n={g.n}, D={dd.D}, spectrum needs Q(sqrt({b}))")

field = GroundField(b)
scheme = scheme_data(g, dd, inter, field)
print("eigenvalues:", ", ".join(t.encode() for t in scheme.theta))
print("idempotent coefficients gamma_i(d) (E_i = sum_d gamma_i(d) A_d):")
for i in range(dd.D + 1):
    print(f"  E_{i}:", ", ".join(v.encode() for v in scheme.gamma[i]))

dual = dual_data(scheme)
system = split_decomposition(scheme, dual)
P = system.grid("dd").projector(1, 3)
print("\nE^{dd}_{1,3} first row:", ", ".join(x.encode() for x in P.row(0)))
print("projector is idempotent exactly:", P @ P == P)

failures = [c for c in verify_split_suite(system) if c["status"] != "pass"]
print("split suite:", "all checks pass with residual 0" if not failures
      else f"FAILURES: {[c['name'] for c in failures]}")
