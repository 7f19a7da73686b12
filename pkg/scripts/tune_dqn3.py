# Third probe: push learning rate / width / duration.
import time

import numpy as np

import agqec
from agqec.channel import NoiseModel, sample_error
from agqec.dqn import TrainConfig, rl_decode, train
from agqec.greedy import GreedyDecoder
from agqec.stabilizer import StabilizerCode

f9 = agqec.build_field(3, 2)
stab = StabilizerCode.from_hermitian_code(
    agqec.build_one_point_code(agqec.CurveSpec(3, 4), f9, 7)
)
dec = GreedyDecoder(stab)


def heldout(net, n_eps=4000, seed=999, p=0.05):
    rng = np.random.default_rng(seed)
    noise = NoiseModel("xz3", p)
    cleared = total = good = 0
    steps = []
    for _ in range(n_eps):
        e = sample_error(noise, 3, 27, rng)
        g = dec.decode(stab.syndrome(e))
        if not np.any(g.residual):
            continue
        total += 1
        r = rl_decode(stab, net, g.residual, max_steps=10)
        if not np.any(r.final):
            cleared += 1
            steps.append(r.steps)
            op = (e + g.correction + r.correction) % 3
            good += stab.classify(op) in ("identity", "stabilizer")
    med = float(np.median(steps)) if steps else None
    return cleared / total, good / total, med


GRID = [
    ("G1_lr20", dict(lr=0.20, margin_weight=1.0, eps_decay_steps=20_000, episodes=15_000)),
    ("G2_demo7", dict(lr=0.10, margin_weight=1.0, eps_decay_steps=20_000, demo_fraction=0.7, episodes=15_000)),
    ("G3_wide", dict(lr=0.10, margin_weight=1.0, eps_decay_steps=20_000, hidden=(256, 256), episodes=15_000)),
    ("G4_long", dict(lr=0.10, margin_weight=1.0, eps_decay_steps=20_000, episodes=60_000)),
]

for name, kw in GRID:
    cfg = TrainConfig(seed=11, **kw)
    t0 = time.time()
    net = train(stab, NoiseModel("xz3", 0.05), cfg)
    cl, ok, med = heldout(net)
    print(
        f"{name}: {round(time.time() - t0)}s clearance {cl:.3f} true-success {ok:.3f} median {med}",
        flush=True,
    )
