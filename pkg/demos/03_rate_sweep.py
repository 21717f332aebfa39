"""
Convergence rate versus coarse size
===================================

Sweep the coarse dimension on the 16x16 advection-diffusion block problem
and compare the predicted rate, the exact spectral radius and what 500
power-method steps observe. At this size the pencil has a few complex
conjugate pairs; ``keep_complex=True`` keeps them as real 2-column blocks.
"""

# %%
from pathlib import Path

from optamg import advdiff_2d, build_block, generalized_eig, kaczmarz_smoother, sweep
from optamg.analysis import write_records
from optamg.report import rates_svg, spy_svg

bs = build_block(advdiff_2d(16))
sm = kaczmarz_smoother(bs.block)
spec = generalized_eig(bs.block, sm.m_sym, keep_complex=True)
print("complex clusters at columns:", spec.complex_blocks)

# %%
records = sweep(bs.block, sm.m_sym, spec, [32, 64, 128, 192, 256, 320, 384, 448])
print(" n_c  1-lambda   rho       power")
for r in records:
    print(f"{r.n_c:4d}  {r.theory_rate:.5f}  {r.rho_exact:.5f}  {r.err_rate:.5f}")

# %%
out = Path("demo_out")
out.mkdir(exist_ok=True)
write_records(records, out / "rates.csv")
rates_svg(records, out / "rates.svg")
spy_svg(bs, out / "spy.svg")
print("figures in", out.resolve())
