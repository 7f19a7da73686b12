# Hyperparameter probe for the residual-syndrome Q-network (development tool,
# not part of the package). Trains several configurations and reports held-out
# clearance so defaults can be pinned with evidence.
import sys
import time

import numpy as np

import agqec
from agqec import dqn
from agqec.channel import NoiseModel, sample_error
from agqec.dqn import TrainConfig, rl_decode, train
from agqec.greedy import GreedyDecoder
from agqec.stabilizer import StabilizerCode

f9 = agqec.build_field(3, 2)
stab = StabilizerCode.from_hermitian_code(
    agqec.build_one_point_code(agqec.CurveSpec(3, 4), f9, 7)
)
dec = GreedyDecoder(stab)


def heldout(net, n_eps=3000, seed=999, p=0.05):
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


ORIG_INIT = dqn.QNetwork.init.__func__


def set_out_scale(scale):
    def init(cls, layer_sizes, rng):
        net = dqn.QNetwork(layer_sizes)
        for i, w in enumerate(net.weights):
            bound = np.sqrt(6.0 / layer_sizes[i])
            net.weights[i] = rng.uniform(-bound, bound, size=w.shape)
        net.weights[-1] *= scale
        return net

    dqn.QNetwork.init = classmethod(init)


GRID = {
    "A_zero_lr5e3": (0.01, dict(lr=5e-3, demo_fraction=0.5)),
    "B_zero_lr1e2_demo7": (0.01, dict(lr=1e-2, demo_fraction=0.7)),
    "C_full_lr1e3": (1.0, dict(lr=1e-3, demo_fraction=0.5)),
    "D_full_lr3e3_demo7": (1.0, dict(lr=3e-3, demo_fraction=0.7, eps_decay_steps=40_000)),
    "E_zero_lr3e3_sync500": (0.01, dict(lr=3e-3, demo_fraction=0.7, target_sync_interval=500, eps_decay_steps=40_000)),
    "F_zero_lr1e2_demo9": (0.01, dict(lr=1e-2, demo_fraction=0.9, eps_end=0.02, eps_decay_steps=30_000)),
}

episodes = int(sys.argv[1]) if len(sys.argv) > 1 else 20_000
for name, (scale, kw) in GRID.items():
    set_out_scale(scale)
    cfg = TrainConfig(episodes=episodes, seed=11, **kw)
    t0 = time.time()
    net = train(stab, NoiseModel("xz3", 0.05), cfg)
    cl, ok, med = heldout(net)
    print(
        f"{name}: {round(time.time() - t0)}s clearance {cl:.3f} true-success {ok:.3f} median {med}",
        flush=True,
    )
