# %% [markdown]
# # Comparing the two sides of the restriction containment
# `restriction_report` builds a generic link, computes the quotient side and the
# along side, and checks that one contains the other.

# %%
from fractions import Fraction

from testideals import FormalCombination, Ideal, RingContext, restriction_report

R = RingContext(7, ("x", "y", "z"))
x, y, z = R.gens()

# %%
cases = {
    "A1 cone": Ideal(R, [x * y - z**2]),
    "cusp cylinder": Ideal(R, [x**2 + y**3]),
    "two quadrics": Ideal(R, [x**2 - y * z, y**2 - x * z + z**2]),
}
for name, I in cases.items():
    for t in (None, Fraction(1, 2)):
        at = FormalCombination([(Ideal(R, [x, y]), t)]) if t else None
        rep = restriction_report(I, at, seed=0)
        print(f"{name:14s} t={t!s:4s} contained={rep.containment_holds} equal={rep.equality_holds}")

# %% [markdown]
# The report serializes to plain JSON for downstream tooling.

# %%
import json

print(json.dumps(restriction_report(cases["A1 cone"], seed=0).to_dict(), indent=1)[:600])
