"""Stage-two decoder: a from-scratch dense Q-network on residual syndromes.

The network maps a one-hot encoded syndrome to one Q-value per single-qudit
action.  Training is standard Q-learning with a replay buffer, a
periodically synchronized target network, an epsilon-greedy behaviour
policy, and plain SGD on the mean squared temporal-difference error.  The
optimizer is deliberately plain so the backward pass stays verifiable
against central finite differences.

Episodes start from greedy-stage residual syndromes, which is exactly the
state distribution the network sees when deployed behind the greedy stage.
All arithmetic is float64 and every random draw comes from one seeded
generator, so training is bit-reproducible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, asdict
from pathlib import Path

import numpy as np

from .channel import NoiseModel, sample_error
from .greedy import GreedyDecoder
from .stabilizer import StabilizerCode


@dataclass
class TrainConfig:
    gamma: float = 0.95
    lr: float = 1e-3
    eps_start: float = 1.0
    eps_end: float = 0.05
    eps_decay_steps: int = 120_000
    buffer_capacity: int = 100_000
    batch_size: int = 64
    target_sync_interval: int = 1_000
    episodes: int = 150_000
    max_steps: int = 10
    p_train: float = 0.05
    r_success: float = 1.0
    r_step: float = -0.05
    r_timeout: float = -1.0
    seed: int = 7
    hidden: tuple[int, int] = (128, 128)
    # Fraction of residual episodes rolled out by the simulator's known
    # solving sequence instead of the epsilon-greedy policy.  Residual
    # syndromes are never one-action-solvable (the greedy stage already took
    # every such move), so with purely random exploration the terminal
    # reward is essentially never observed and Q-learning gets no signal;
    # demonstration transitions in the replay buffer fix that while leaving
    # the learned policy and its evaluation untouched.  Set to 0 for pure
    # epsilon-greedy data collection.
    demo_fraction: float = 0.5
    # Large-margin supervision on demonstration transitions: pushes the
    # demonstrated action above every alternative by `margin`.  Without it
    # the argmax over a hundred-plus mostly-untrained outputs is dominated
    # by generalization noise and greedy-with-respect-to-Q rollouts fail;
    # margin_weight 0 disables the term (pure TD learning).
    margin: float = 0.3
    margin_weight: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError("gamma must lie in [0, 1]")
        if not (0.0 <= self.eps_end <= 1.0 and 0.0 <= self.eps_start <= 1.0):
            raise ValueError("exploration rates must lie in [0, 1]")
        if self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")
        if isinstance(self.hidden, list):
            object.__setattr__(self, "hidden", tuple(self.hidden))


def encode_state(q: int, s: np.ndarray) -> np.ndarray:
    """Concatenated one-hot blocks: block i carries a 1 at position s_i."""
    s = np.asarray(s, dtype=np.int64)
    out = np.zeros(s.shape[0] * q)
    out[np.arange(s.shape[0]) * q + s] = 1.0
    return out


def decode_state(q: int, x: np.ndarray) -> np.ndarray:
    """Inverse of encode_state, for round-trip checks."""
    blocks = np.asarray(x).reshape(-1, q)
    return np.argmax(blocks, axis=1).astype(np.int64)


class QNetwork:
    """Dense net: rectifier hidden layers, identity output, float64 weights."""

    def __init__(self, layer_sizes: list[int], weights=None, biases=None):
        if len(layer_sizes) < 2:
            raise ValueError("need at least input and output layers")
        self.layer_sizes = list(layer_sizes)
        if weights is None:
            self.weights = [
                np.zeros((layer_sizes[i + 1], layer_sizes[i])) for i in range(len(layer_sizes) - 1)
            ]
            self.biases = [np.zeros(layer_sizes[i + 1]) for i in range(len(layer_sizes) - 1)]
        else:
            self.weights = [np.asarray(w, dtype=np.float64) for w in weights]
            self.biases = [np.asarray(b, dtype=np.float64) for b in biases]

    @classmethod
    def init(cls, layer_sizes: list[int], rng: np.random.Generator) -> "QNetwork":
        """He-style uniform initialization, deterministic given the generator.

        The output layer is scaled down so initial Q-values sit near zero:
        with a wide action set, randomly optimistic untried actions would
        otherwise outrank learned ones at the argmax.
        """
        net = cls(layer_sizes)
        for i, w in enumerate(net.weights):
            bound = np.sqrt(6.0 / layer_sizes[i])
            net.weights[i] = rng.uniform(-bound, bound, size=w.shape)
        net.weights[-1] *= 0.01
        return net

    def copy(self) -> "QNetwork":
        return QNetwork(
            self.layer_sizes,
            [w.copy() for w in self.weights],
            [b.copy() for b in self.biases],
        )

    def forward(self, x: np.ndarray) -> np.ndarray:
        """Q-values for a single state (1-D) or a batch (2-D, rows = states)."""
        h = np.asarray(x, dtype=np.float64)
        if h.ndim == 1:
            if h.shape[0] != self.layer_sizes[0]:
                raise ValueError("input dimension mismatch")
            for w, b in zip(self.weights[:-1], self.biases[:-1]):
                h = np.maximum(h @ w.T + b, 0.0)
            return h @ self.weights[-1].T + self.biases[-1]
        if h.shape[1] != self.layer_sizes[0]:
            raise ValueError("input dimension mismatch")
        for w, b in zip(self.weights[:-1], self.biases[:-1]):
            h = np.maximum(h @ w.T + b, 0.0)
        return h @ self.weights[-1].T + self.biases[-1]


def step_env(
    code: StabilizerCode,
    s: np.ndarray,
    action_idx: int,
    steps_taken: int,
    cfg: TrainConfig,
    action_syndromes: np.ndarray,
) -> tuple[np.ndarray, float, bool]:
    """Apply one action to the syndrome environment.

    next = s - syndrome(action) mod q.  Reaching zero pays r_success and
    terminates; hitting the step limit with a nonzero syndrome pays
    r_timeout and terminates; anything else pays r_step.
    """
    nxt = (np.asarray(s) - action_syndromes[action_idx]) % code.q
    if not np.any(nxt):
        return nxt, cfg.r_success, True
    if steps_taken + 1 >= cfg.max_steps:
        return nxt, cfg.r_timeout, True
    return nxt, cfg.r_step, False


@dataclass
class Transition:
    state: np.ndarray  # encoded (one-hot) syndrome
    action: int
    reward: float
    next_state: np.ndarray
    done: bool


def batch_from_transitions(transitions: list[Transition]):
    """Stack a list of transitions into the array batch td_update consumes."""
    return (
        np.stack([t.state for t in transitions]),
        np.array([t.action for t in transitions], dtype=np.int64),
        np.array([t.reward for t in transitions]),
        np.stack([t.next_state for t in transitions]),
        np.array([t.done for t in transitions], dtype=bool),
    )


class ReplayBuffer:
    """Fixed-capacity ring buffer storing encoded states as flat arrays."""

    def __init__(self, capacity: int, state_dim: int):
        self.capacity = capacity
        self.states = np.zeros((capacity, state_dim))
        self.actions = np.zeros(capacity, dtype=np.int64)
        self.rewards = np.zeros(capacity)
        self.next_states = np.zeros((capacity, state_dim))
        self.dones = np.zeros(capacity, dtype=bool)
        self.demos = np.zeros(capacity, dtype=bool)
        self.size = 0
        self._cursor = 0

    def push(self, state, action, reward, next_state, done, demo=False):
        i = self._cursor
        self.states[i] = state
        self.actions[i] = action
        self.rewards[i] = reward
        self.next_states[i] = next_state
        self.dones[i] = done
        self.demos[i] = demo
        self._cursor = (i + 1) % self.capacity
        self.size = min(self.size + 1, self.capacity)

    def sample(self, batch_size: int, rng: np.random.Generator):
        idx = rng.integers(0, self.size, size=batch_size)
        return (
            self.states[idx],
            self.actions[idx],
            self.rewards[idx],
            self.next_states[idx],
            self.dones[idx],
        )

    def sample_flagged(self, batch_size: int, rng: np.random.Generator):
        idx = rng.integers(0, self.size, size=batch_size)
        batch = (
            self.states[idx],
            self.actions[idx],
            self.rewards[idx],
            self.next_states[idx],
            self.dones[idx],
        )
        return batch, self.demos[idx]


def return_bounds(cfg: TrainConfig) -> tuple[float, float]:
    """The interval of returns actually achievable in one episode.

    The best case is immediate success; the worst is a full episode of step
    penalties capped by the timeout penalty.  These bound every valid
    Q-value, so TD targets are clamped to them (the max-over-actions
    bootstrap otherwise amplifies estimation noise by ~gamma/(1-gamma) and
    the values run away).
    """
    worst_steps = sum(cfg.r_step * cfg.gamma**t for t in range(cfg.max_steps - 1))
    lo = min(worst_steps + cfg.gamma ** (cfg.max_steps - 1) * cfg.r_timeout, cfg.r_timeout)
    hi = max(cfg.r_success, cfg.r_step, cfg.r_timeout)
    return min(lo, 0.0), hi


def _backward(net: QNetwork, acts, delta):
    grads_w = [None] * len(net.weights)
    grads_b = [None] * len(net.biases)
    for layer in range(len(net.weights) - 1, -1, -1):
        grads_w[layer] = delta.T @ acts[layer]
        grads_b[layer] = delta.sum(axis=0)
        if layer > 0:
            delta = (delta @ net.weights[layer]) * (acts[layer] > 0)
    return grads_w, grads_b


def _forward_cached(net: QNetwork, states):
    acts = [np.asarray(states, dtype=np.float64)]
    h = acts[0]
    for w, b in zip(net.weights[:-1], net.biases[:-1]):
        h = np.maximum(h @ w.T + b, 0.0)
        acts.append(h)
    out = h @ net.weights[-1].T + net.biases[-1]
    return acts, out


def td_loss_and_grads(
    net: QNetwork,
    target_net: QNetwork,
    batch,
    gamma: float,
    clamp: tuple[float, float] | None = None,
):
    """Mean squared TD error and its gradients w.r.t. net parameters.

    Targets use the frozen target network: y = r + gamma * max_a' Q'(s', a')
    for non-terminal transitions, y = r otherwise, optionally clamped to the
    achievable-return interval.
    """
    states, actions, rewards, next_states, dones = batch
    B = states.shape[0]

    next_q = target_net.forward(next_states)
    targets = rewards + np.where(dones, 0.0, gamma * next_q.max(axis=1))
    if clamp is not None:
        targets = np.clip(targets, clamp[0], clamp[1])

    acts, out = _forward_cached(net, states)
    q_taken = out[np.arange(B), actions]
    diff = q_taken - targets
    loss = float(np.mean(diff**2))

    # d loss / d out is nonzero only at the taken actions.
    delta = np.zeros_like(out)
    delta[np.arange(B), actions] = 2.0 * diff / B

    grads_w, grads_b = _backward(net, acts, delta)
    return loss, grads_w, grads_b


def demo_margin_loss_and_grads(net: QNetwork, states, actions, margin: float, batch_size: int):
    """Large-margin hinge on demonstrated actions.

    Per sample: max_a [Q(s, a) + margin * (a != a_demo)] - Q(s, a_demo),
    zero exactly when the demonstrated action beats every alternative by the
    margin.  Averaged over the full batch size so its scale matches the TD
    term it accompanies.
    """
    if states.shape[0] == 0:
        return 0.0, None, None
    acts, out = _forward_cached(net, states)
    idx = np.arange(states.shape[0])
    aug = out + margin
    aug[idx, actions] -= margin
    best = np.argmax(aug, axis=1)
    losses = aug[idx, best] - out[idx, actions]
    delta = np.zeros_like(out)
    active = best != actions
    delta[idx[active], best[active]] += 1.0 / batch_size
    delta[idx[active], actions[active]] -= 1.0 / batch_size
    grads_w, grads_b = _backward(net, acts, delta)
    return float(losses.sum() / batch_size), grads_w, grads_b


def td_update(net: QNetwork, target_net: QNetwork, batch, cfg: TrainConfig) -> float:
    """One SGD step on the TD loss; mutates net in place, returns the loss."""
    loss, grads_w, grads_b = td_loss_and_grads(
        net, target_net, batch, cfg.gamma, clamp=return_bounds(cfg)
    )
    for i in range(len(net.weights)):
        net.weights[i] -= cfg.lr * grads_w[i]
        net.biases[i] -= cfg.lr * grads_b[i]
    return loss


def train_update(net: QNetwork, target_net: QNetwork, batch, demo_mask, cfg: TrainConfig) -> float:
    """Training-loop update: TD loss plus the margin term on demo samples."""
    loss, grads_w, grads_b = td_loss_and_grads(
        net, target_net, batch, cfg.gamma, clamp=return_bounds(cfg)
    )
    if cfg.margin_weight > 0 and np.any(demo_mask):
        states, actions = batch[0][demo_mask], batch[1][demo_mask]
        m_loss, m_gw, m_gb = demo_margin_loss_and_grads(
            net, states, actions, cfg.margin, batch[0].shape[0]
        )
        loss += cfg.margin_weight * m_loss
        for i in range(len(grads_w)):
            grads_w[i] += cfg.margin_weight * m_gw[i]
            grads_b[i] += cfg.margin_weight * m_gb[i]
    for i in range(len(net.weights)):
        net.weights[i] -= cfg.lr * grads_w[i]
        net.biases[i] -= cfg.lr * grads_b[i]
    return loss


def _epsilon(agent_steps: int, cfg: TrainConfig) -> float:
    frac = min(1.0, agent_steps / max(1, cfg.eps_decay_steps))
    return cfg.eps_start + (cfg.eps_end - cfg.eps_start) * frac


def _solving_actions(q: int, n: int, residual_op: np.ndarray) -> list[int]:
    """Action indices that cancel the residual operator qudit by qudit.

    For a residual with exponents (a_j, b_j) on qudit j, the X^{a_j} action
    subtracts -a_j times the Z-part column from the syndrome and the Z^{b_j}
    action subtracts +b_j times the X-part column, so the sequence lands
    exactly on the zero syndrome.
    """
    per_qudit = 2 * (q - 1)
    seq = []
    for j in range(n):
        a, b = int(residual_op[j]), int(residual_op[n + j])
        if a:
            seq.append(j * per_qudit + (a - 1))
        if b:
            seq.append(j * per_qudit + (q - 1) + (b - 1))
    return seq


def _expert_action(q: int, n: int, residual_op: np.ndarray) -> int | None:
    """First action of the canonical solving sequence, None when solved."""
    nz = np.nonzero(residual_op)[0]
    if nz.size == 0:
        return None
    j = int(nz[0] % n)
    per_qudit = 2 * (q - 1)
    a = int(residual_op[j])
    if a:
        return j * per_qudit + (a - 1)
    b = int(residual_op[n + j])
    return j * per_qudit + (q - 1) + (b - 1)


def train(
    code: StabilizerCode,
    noise: NoiseModel,
    cfg: TrainConfig,
    verbose: bool = False,
) -> QNetwork:
    """Train a Q-network on greedy-residual syndromes of the given code.

    Each episode samples an error at cfg.p_train under the given noise kind,
    runs the greedy stage, and skips when the residual is already zero.
    Otherwise the agent plays epsilon-greedy from the residual syndrome with
    replay-buffer updates and periodic target sync.  Fully deterministic
    given cfg.seed.
    """
    rng = np.random.default_rng(cfg.seed)
    q = code.q
    m = code.n - code.k
    decoder = GreedyDecoder(code)
    n_actions = decoder.actions.shape[0]
    sizes = [m * q, *cfg.hidden, n_actions]
    net = QNetwork.init(sizes, rng)
    target = net.copy()
    buf = ReplayBuffer(cfg.buffer_capacity, m * q)
    train_noise = NoiseModel(noise.kind, cfg.p_train)

    agent_steps = 0
    updates = 0
    attempted = 0
    for episode in range(cfg.episodes):
        e = sample_error(train_noise, q, code.n, rng)
        g = decoder.decode(code.syndrome(e))
        s = g.residual
        if not np.any(s):
            continue
        attempted += 1
        # The simulator knows the operator the syndrome came from, and can
        # keep knowing it through any action the agent takes, so every
        # visited state gets an expert-labelled transition in addition to
        # the executed one (the executed action differs on policy episodes).
        residual_op = (e + g.correction) % q
        follow_expert = rng.random() < cfg.demo_fraction
        for t in range(cfg.max_steps):
            x = encode_state(q, s)
            a_exp = _expert_action(q, code.n, residual_op)
            if a_exp is not None:
                nxt_e, rew_e, done_e = step_env(code, s, a_exp, t, cfg, decoder.action_syndromes)
                buf.push(x, a_exp, rew_e, encode_state(q, nxt_e), done_e, demo=True)
            if follow_expert and a_exp is not None:
                a = a_exp
                nxt, reward, done = nxt_e, rew_e, done_e
            else:
                if rng.random() < _epsilon(agent_steps, cfg):
                    a = int(rng.integers(0, n_actions))
                else:
                    a = int(np.argmax(net.forward(x)))
                nxt, reward, done = step_env(code, s, a, t, cfg, decoder.action_syndromes)
                if a != a_exp:
                    buf.push(x, a, reward, encode_state(q, nxt), done, demo=False)
            residual_op = (residual_op - decoder.actions[a]) % q
            agent_steps += 1
            if buf.size >= cfg.batch_size:
                batch, demo_mask = buf.sample_flagged(cfg.batch_size, rng)
                train_update(net, target, batch, demo_mask, cfg)
                updates += 1
                if updates % cfg.target_sync_interval == 0:
                    target = net.copy()
            s = nxt
            if done:
                break
        if verbose and attempted and attempted % 5000 == 0:
            print(
                f"episode {episode + 1}: residual episodes {attempted}, "
                f"eps {_epsilon(agent_steps, cfg):.3f}, updates {updates}"
            )
    return net


@dataclass
class RLResult:
    correction: np.ndarray
    final: np.ndarray
    steps: int


def rl_decode(
    code: StabilizerCode, net: QNetwork, s_res: np.ndarray, max_steps: int = 10
) -> RLResult:
    """Greedy-with-respect-to-Q rollout from a residual syndrome.

    Pure: never mutates the network.  The accumulated correction follows the
    same inverse-action convention as the greedy stage.
    """
    decoder = getattr(code, "_greedy_decoder", None)
    if decoder is None:
        decoder = GreedyDecoder(code)
        code._greedy_decoder = decoder
    q = code.q
    s = np.asarray(s_res, dtype=np.int64) % q
    correction = np.zeros(2 * code.n, dtype=np.int64)
    steps = 0
    while np.any(s) and steps < max_steps:
        a = int(np.argmax(net.forward(encode_state(q, s))))
        correction = (correction - decoder.actions[a]) % q
        s = (s - decoder.action_syndromes[a]) % q
        steps += 1
    return RLResult(correction=correction, final=s, steps=steps)


def save_model(net: QNetwork, cfg: TrainConfig, path: str | Path) -> None:
    """Model file: sizes, row-major weights, biases, and the config echo."""
    doc = {
        "layer_sizes": net.layer_sizes,
        "weights": [w.reshape(-1).tolist() for w in net.weights],
        "biases": [b.tolist() for b in net.biases],
        "train_config": asdict(cfg),
    }
    Path(path).write_text(json.dumps(doc))


def load_model(path: str | Path) -> tuple[QNetwork, TrainConfig]:
    doc = json.loads(Path(path).read_text())
    sizes = doc["layer_sizes"]
    weights = [
        np.array(w, dtype=np.float64).reshape(sizes[i + 1], sizes[i])
        for i, w in enumerate(doc["weights"])
    ]
    biases = [np.array(b, dtype=np.float64) for b in doc["biases"]]
    cfg = TrainConfig(**doc["train_config"])
    return QNetwork(sizes, weights, biases), cfg
