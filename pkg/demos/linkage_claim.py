# %% [markdown]
# # Frobenius colons through a Gorenstein link
# The height-3 Gorenstein ideal (xy, xz, yz, x^3-y^3, y^3-z^3) is linked to a
# principal ideal modulo I by a generic regular sequence inside it.

# %%
from testideals import Ideal, LinkageProblem, RingContext, verify_claim2

for p in (2, 5, 7):
    R = RingContext(p, ("x", "y", "z"))
    x, y, z = R.gens()
    I = Ideal(R, [x * y, x * z, y * z, x**3 - y**3, y**3 - z**3])
    lp = LinkageProblem.build(I, seed=0)
    print(f"p={p} link generator: {lp.f}")
    for e in (1, 2):
        r = verify_claim2(lp, e)
        print(f"  e={e} q={r.q} holds={r.holds} equality={r.equality}")

# %% [markdown]
# Replacing the link by 1 breaks the statement, which is a useful negative control.

# %%
print(verify_claim2(lp.with_link(R.one()), 1).holds)
