# Second probe: DAgger-style expert labels at every visited state + hinge.
import sys
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


GRID = {
    "lr02_mw5": dict(lr=0.02, margin_weight=5.0),
    "lr05_mw2": dict(lr=0.05, margin_weight=2.0),
    "lr10_mw1": dict(lr=0.10, margin_weight=1.0),
    "lr02_mw5_eps30k": dict(lr=0.02, margin_weight=5.0, eps_decay_steps=30_000),
    "lr05_mw2_demo3": dict(lr=0.05, margin_weight=2.0, demo_fraction=0.3),
}

episodes = int(sys.argv[1]) if len(sys.argv) > 1 else 15_000
for name, kw in GRID.items():
    cfg = TrainConfig(episodes=episodes, seed=11, **kw)
    t0 = time.time()
    net = train(stab, NoiseModel("xz3", 0.05), cfg)
    cl, ok, med = heldout(net)
    print(
        f"{name}: {round(time.time() - t0)}s clearance {cl:.3f} true-success {ok:.3f} median {med}",
        flush=True,
    )
