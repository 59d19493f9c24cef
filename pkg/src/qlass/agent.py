"""DQN-style agent whose Q-function is a committee of classifiers.

Q(s, a) is read off the target committee's votes as ``2 * share(a) - 1`` so
that it lives on the same [-1, 1] scale as the environment's reward. Every
transition goes into a replay buffer; the ones rewarded +1 also certify
``action == true label`` and so become supervised pairs. After each
``refit_every`` episodes every member is refit on its own bootstrap resample
of those pairs, and every ``target_sync_every`` refits the target committee
is replaced by a copy of the online one.
"""
from __future__ import annotations

import copy
import csv
import time
from collections import deque
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import learners
from .env import CORRECT_REWARD, ClassificationEnv
from .errors import ConfigError
from .learners import io as model_io
from .metrics import Metrics, compute_metrics
from .rlcore import ReplayBuffer, Transition, check_epsilon_schedule, decay_epsilon, epsilon_greedy, sync_target

FAMILY_CHOICES = (*learners.FAMILIES, "mixed")
AGENT_FORMAT = "qlass-agent"
CURVE_HEADER = ("episode", "accuracy", "mean_reward", "epsilon", "wall_ms")


@dataclass(frozen=True)
class AgentConfig:
    family: str = "tree"
    ensemble_size: int = 5
    episodes: int = 50
    epsilon_start: float = 1.0
    epsilon_decay: float = 0.995
    epsilon_min: float = 0.05
    gamma: float = 0.0
    buffer_capacity: int = 10_000
    refit_every: int = 1
    target_sync_every: int = 1
    bootstrap: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILY_CHOICES:
            raise ConfigError(f"family must be one of {FAMILY_CHOICES}, got {self.family!r}")
        if min(self.ensemble_size, self.buffer_capacity, self.refit_every, self.target_sync_every) < 1:
            raise ConfigError("ensemble_size, buffer_capacity, refit_every and target_sync_every must be positive")
        if self.episodes < 0:
            raise ConfigError("episodes must be non-negative")
        if self.gamma != 0.0:
            # consecutive rows are unrelated, so there is nothing to bootstrap from
            raise ConfigError("classification runs require gamma = 0")
        check_epsilon_schedule(self.epsilon_start, self.epsilon_decay, self.epsilon_min)

    def member_family(self, i: int) -> str:
        if self.family == "mixed":
            return learners.FAMILIES[i % len(learners.FAMILIES)]
        return self.family


@dataclass
class EpisodeRecord:
    episode: int
    accuracy: float
    mean_reward: float
    epsilon: float
    wall_ms: float


@dataclass
class EpisodeLog:
    records: list[EpisodeRecord] = field(default_factory=list)

    def __len__(self):
        return len(self.records)

    @property
    def accuracies(self) -> np.ndarray:
        return np.array([r.accuracy for r in self.records])

    def write_csv(self, path) -> None:
        with Path(path).open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CURVE_HEADER)
            for r in self.records:
                writer.writerow([r.episode, repr(r.accuracy), repr(r.mean_reward), repr(r.epsilon),
                                 f"{r.wall_ms:.3f}"])

    @classmethod
    def read_csv(cls, path) -> "EpisodeLog":
        with Path(path).open(newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            return cls([EpisodeRecord(int(row["episode"]), float(row["accuracy"]), float(row["mean_reward"]),
                                      float(row["epsilon"]), float(row["wall_ms"])) for row in reader])


class DQNAgent:
    """Single-owner; fitted agents may be shared read-only for evaluation."""

    def __init__(self, n_classes: int, config: AgentConfig | None = None, member_params=None):
        self.n_classes = int(n_classes)
        self.config = config or AgentConfig()
        self.member_params = member_params
        self.members: list = []
        self.target_members: list = []
        self.buffer = ReplayBuffer(self.config.buffer_capacity)
        self.supervised: deque = deque(maxlen=self.config.buffer_capacity)
        self.n_refits = 0
        self.rng = np.random.default_rng(self.config.seed)

    # -- Q-function -------------------------------------------------------

    def vote_shares(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        shares = np.zeros((len(X), self.n_classes))
        if not self.target_members:
            return shares
        rows = np.arange(len(X))
        for member in self.target_members:
            shares[rows, member.predict(X)] += 1.0
        return shares / len(self.target_members)

    def q_values_batch(self, X) -> np.ndarray:
        if not self.target_members:
            # cold start: no opinion on any class
            return np.zeros((len(np.atleast_2d(X)), self.n_classes))
        return 2.0 * self.vote_shares(X) - 1.0

    def q_values(self, state) -> np.ndarray:
        return self.q_values_batch(np.asarray(state, dtype=float)[None, :])[0]

    def act(self, state, epsilon: float, rng=None) -> int:
        return epsilon_greedy(self.q_values(state), epsilon, self.rng if rng is None else rng)

    def predict(self, X) -> np.ndarray:
        return np.argmax(self.q_values_batch(X), axis=1)

    # -- learning ---------------------------------------------------------

    def record(self, t: Transition) -> None:
        self.buffer.push(t)
        if t.reward == CORRECT_REWARD:
            self.supervised.append((t.state, t.action))

    def supervised_arrays(self):
        X = np.array([s for s, _ in self.supervised], dtype=float)
        y = np.array([a for _, a in self.supervised], dtype=np.int64)
        return X, y

    def refit(self, rng=None) -> None:
        """Refit every member on a bootstrap resample of the supervised pairs."""
        if not self.supervised:
            return
        rng = self.rng if rng is None else rng
        X, y = self.supervised_arrays()
        n = len(y)
        members = []
        for i in range(self.config.ensemble_size):
            sub_seed = int(rng.integers(2**31))
            if self.config.bootstrap:
                idx = np.random.default_rng(sub_seed).integers(0, n, size=n)
                Xi, yi = X[idx], y[idx]
            else:
                Xi, yi = X, y
            members.append(learners.fit(self.config.member_family(i), Xi, yi, self._member_params(), sub_seed,
                                        n_classes=self.n_classes, allow_missing_classes=True))
        self.members = members
        self.n_refits += 1
        if self.n_refits % self.config.target_sync_every == 0 or not self.target_members:
            self.sync_target()

    def sync_target(self) -> None:
        self.target_members = [None] * len(self.members)
        sync_target(self.members, self.target_members)

    def _member_params(self):
        if self.config.family == "mixed" or self.member_params is None:
            return None
        return self.member_params

    def train(self, env: ClassificationEnv) -> EpisodeLog:
        """Run ``config.episodes`` epsilon-greedy passes over ``env``."""
        if env.n_classes != self.n_classes:
            raise ConfigError(f"environment has {env.n_classes} classes, agent {self.n_classes}")
        cfg = self.config
        log = EpisodeLog()
        epsilon = cfg.epsilon_start
        for episode in range(cfg.episodes):
            start = time.perf_counter()
            state = env.reset(episode)
            # the target committee is frozen within an episode, so Q can be
            # tabulated once per row up front
            q = self.q_values_batch(env.features)
            total, correct, steps, done = 0.0, 0, 0, False
            while not done:
                action = epsilon_greedy(q[env.current_row], epsilon, self.rng)
                next_state, reward, done = env.step(action)
                self.record(Transition(state, action, reward, next_state, done))
                total += reward
                correct += reward == CORRECT_REWARD
                steps += 1
                state = next_state
            if (episode + 1) % cfg.refit_every == 0:
                self.refit()
            wall_ms = (time.perf_counter() - start) * 1000.0
            log.records.append(EpisodeRecord(episode, correct / steps, total / steps, epsilon, wall_ms))
            epsilon = decay_epsilon(epsilon, cfg.epsilon_decay, cfg.epsilon_min)
        return log

    def evaluate(self, features, labels) -> tuple[np.ndarray, Metrics]:
        predictions = self.predict(features)
        return predictions, compute_metrics(labels, predictions, self.n_classes)

    # -- bookkeeping ------------------------------------------------------

    def size_bytes(self) -> int:
        members = sum(m.size_bytes() for m in self.members)
        buffer = 0
        if len(self.buffer):
            d = np.size(next(iter(self.buffer)).state)
            buffer = len(self.buffer) * (2 * d + 3) * 8
        return members + buffer

    def to_dict(self) -> dict:
        return {
            "format": AGENT_FORMAT,
            "format_version": model_io.FORMAT_VERSION,
            "config": asdict(self.config),
            "member_params": model_io.params_to_dict(self.member_params),
            "n_classes": self.n_classes,
            "n_refits": self.n_refits,
            "members": [model_io.model_to_dict(m) for m in self.members],
            "target_members": [model_io.model_to_dict(m) for m in self.target_members],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "DQNAgent":
        config = AgentConfig(**doc["config"])
        params = None
        if config.family != "mixed":
            params = model_io.params_from_dict(config.family, doc.get("member_params"))
        agent = cls(doc["n_classes"], config, params)
        agent.n_refits = doc["n_refits"]
        agent.members = [model_io.model_from_dict(m) for m in doc["members"]]
        agent.target_members = [model_io.model_from_dict(m) for m in doc["target_members"]]
        return agent

    def save(self, path) -> None:
        model_io.dump(self.to_dict(), path)

    @classmethod
    def load(cls, path) -> "DQNAgent":
        return cls.from_dict(model_io.load(path, AGENT_FORMAT))

    def clone(self) -> "DQNAgent":
        return copy.deepcopy(self)


def train_agent(train, config: AgentConfig | None = None, member_params=None) -> tuple[DQNAgent, EpisodeLog]:
    """Convenience wrapper: build the environment and agent from a Dataset and train."""
    config = config or AgentConfig()
    env = ClassificationEnv.from_dataset(train, episode_seed=config.seed)
    agent = DQNAgent(env.n_classes, config, member_params)
    return agent, agent.train(env)
