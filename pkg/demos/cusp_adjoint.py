# %% [markdown]
# # The cusp and its adjoint ideal
# For the plane curve x^3 + y^5 the test ideal along the curve should be the
# adjoint (x^2, xy, y^3) once p is large enough. We watch the descending chain.

# %%
from testideals import Ideal, RingContext
from testideals.jobs import ideal_lines
from testideals.tau import test_ideal_along_computation as along_computation

# %%
for p in (7, 11, 13):
    R = RingContext(p, ("x", "y"))
    x, y = R.gens()
    comp = along_computation(Ideal(R, [x**3 + y**5]))
    print(f"p={p}  gamma={comp.test_element.gamma}  N={comp.test_element.N}")
    for e, J in enumerate(comp.chain):
        print(f"  level {e}: {', '.join(ideal_lines(J))}")
    print("  result:", ", ".join(ideal_lines(comp.result)))

# %% [markdown]
# Even p=2 lands on the same ideal here, although the chain takes longer to settle.

# %%
R = RingContext(2, ("x", "y"))
x, y = R.gens()
comp = along_computation(Ideal(R, [x**3 + y**5]))
print(", ".join(ideal_lines(comp.result)), "after", len(comp.chain), "levels")
