"""Exact moments of Merton and variance gamma models, checked by simulation.

Run with ``python3 demos/levy_models_monte_carlo.py``. The simulation
uses 10^6 samples and takes about a second.
"""
from fractions import Fraction as F

from cumpoly import GaussianSpec, MertonSpec, VGSpec, merton_moments, vg_moments
from cumpoly.mc import SampleSpec, validate

merton = MertonSpec([F(1, 20)], [[F(1, 25)]], 1, GaussianSpec([F(-1, 10)], [[F(9, 100)]]), t=1)
m = merton_moments(merton, 4)
print("Merton moments:", ", ".join(f"{m[k]}" for k in range(1, 5)))

vg = VGSpec(1, F(1, 4), [F(1, 10)], [[F(1, 25)]])
v = vg_moments(vg, 3)
print("variance gamma moments:", ", ".join(f"{v[k]}" for k in range(1, 4)))

for name, model, order in [("merton", merton, 4), ("vg", vg, 3)]:
    report = validate(SampleSpec(model, 10 ** 6, 20261016, order), k=4)
    print(f"\n{name}: {'all within 4 standard errors' if report.passed else 'FAILED'}")
    for r in report.results:
        print(f"  m{r['index']}: exact {r['symbolic']:>14}  estimate {r['estimate']: .6f}  se {r['se']:.1e}")
