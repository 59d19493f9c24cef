"""Tabular Q-learning with experience replay and fixed targets.

Includes two small deterministic MDPs (a chain and a gridworld) that give
the machinery a known optimum to converge to.
"""
from __future__ import annotations

import copy
import csv
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Any, NamedTuple

import numpy as np

from .errors import ConfigError, EmptyBuffer, InvalidAction, ShapeMismatch


class Transition(NamedTuple):
    state: Any
    action: int
    reward: float
    next_state: Any
    terminal: bool


@dataclass
class QTable:
    values: np.ndarray

    @classmethod
    def zeros(cls, n_states: int, n_actions: int) -> "QTable":
        return cls(np.zeros((n_states, n_actions)))

    @property
    def shape(self):
        return self.values.shape

    def copy(self) -> "QTable":
        return QTable(self.values.copy())

    def greedy_policy(self) -> np.ndarray:
        return np.argmax(self.values, axis=1)


@dataclass(frozen=True)
class QLearnParams:
    alpha: float = 0.1
    gamma: float = 0.9
    epsilon_start: float = 1.0
    epsilon_decay: float = 0.995
    epsilon_min: float = 0.05
    episodes: int = 500
    batch_size: int = 32
    target_sync_every: int = 100
    buffer_capacity: int = 10_000

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ConfigError("alpha must lie in (0, 1]")
        if not 0.0 <= self.gamma <= 1.0:
            raise ConfigError("gamma must lie in [0, 1]")
        check_epsilon_schedule(self.epsilon_start, self.epsilon_decay, self.epsilon_min)
        if min(self.batch_size, self.target_sync_every, self.buffer_capacity) < 1 or self.episodes < 0:
            raise ConfigError("episodes, batch_size, target_sync_every and buffer_capacity must be positive")


def check_epsilon_schedule(start, decay, minimum):
    if not (0.0 <= minimum <= start <= 1.0):
        raise ConfigError(f"need 0 <= epsilon_min ({minimum}) <= epsilon_start ({start}) <= 1")
    if not 0.0 < decay <= 1.0:
        raise ConfigError(f"epsilon_decay must lie in (0, 1], got {decay}")


def decay_epsilon(epsilon: float, decay: float, minimum: float) -> float:
    return max(minimum, epsilon * decay)


def q_update(q: QTable, t: Transition, alpha: float, gamma: float, target: QTable | None = None) -> float:
    """Move Q(s, a) toward r + gamma * max_a' Q_target(s', a'); returns the new value.

    Terminal transitions do not bootstrap.
    """
    target = q if target is None else target
    bootstrap = 0.0 if t.terminal else gamma * float(np.max(target.values[t.next_state]))
    current = q.values[t.state, t.action]
    # same as current + alpha * (td_target - current), but exact when alpha == 1
    q.values[t.state, t.action] = (1.0 - alpha) * current + alpha * (t.reward + bootstrap)
    return float(q.values[t.state, t.action])


def epsilon_greedy(q_row, epsilon: float, rng: np.random.Generator) -> int:
    """Uniform random action with probability ``epsilon``, else argmax (lowest index on ties).

    The generator is consumed only as far as needed: no draw at all when
    ``epsilon`` is 0.
    """
    q_row = np.asarray(q_row)
    if epsilon > 0.0 and rng.random() < epsilon:
        return int(rng.integers(len(q_row)))
    return int(np.argmax(q_row))


class ReplayBuffer:
    """Fixed-capacity FIFO of transitions. Single-owner, not thread safe."""

    def __init__(self, capacity: int = 10_000):
        if capacity < 1:
            raise ConfigError("replay capacity must be positive")
        self.capacity = capacity
        self._slots: deque = deque(maxlen=capacity)

    def __len__(self):
        return len(self._slots)

    def __iter__(self):
        return iter(self._slots)

    def push(self, t: Transition) -> None:
        self._slots.append(t)

    def sample(self, batch_size: int, rng: np.random.Generator) -> list[Transition]:
        """Uniform draws with replacement."""
        if not self._slots:
            raise EmptyBuffer("cannot sample from an empty replay buffer")
        idx = rng.integers(len(self._slots), size=batch_size)
        return [self._slots[i] for i in idx]


def replay_push(buffer: ReplayBuffer, t: Transition) -> None:
    buffer.push(t)


def replay_sample(buffer: ReplayBuffer, batch_size: int, rng) -> list[Transition]:
    return buffer.sample(batch_size, rng)


def sync_target(online, target) -> None:
    """Overwrite ``target`` in place with a copy of ``online``."""
    if isinstance(online, QTable):
        if online.shape != target.shape:
            raise ShapeMismatch(f"online {online.shape} vs target {target.shape}")
        np.copyto(target.values, online.values)
    else:
        if len(online) != len(target):
            raise ShapeMismatch(f"online has {len(online)} members, target {len(target)}")
        target[:] = copy.deepcopy(list(online))


# -- sanity MDPs --------------------------------------------------------------

class ChainMDP:
    """States 0..n-1 in a line; action 0 moves left, 1 moves right.

    Moving right from the last state pays ``goal_reward`` and ends the
    episode. Every other move pays ``step_reward``; moving left at state 0
    stays put. Episodes start at state 0.
    """

    LEFT, RIGHT = 0, 1

    def __init__(self, n: int = 5, step_reward: float = 0.0, goal_reward: float = 1.0, max_steps: int = 100):
        self.n_states = n
        self.n_actions = 2
        self.step_reward = step_reward
        self.goal_reward = goal_reward
        self.max_steps = max_steps
        self.steps = 0
        self.truncated = False

    def reset(self, seed=None) -> int:
        self.steps = 0
        self.truncated = False
        return 0

    def model(self, state, action):
        """Deterministic dynamics without the step cap: (next_state, reward, terminal)."""
        if action not in (self.LEFT, self.RIGHT):
            raise InvalidAction(f"action {action} not in {{0, 1}}")
        if action == self.RIGHT:
            if state == self.n_states - 1:
                return state, self.goal_reward, True
            return state + 1, self.step_reward, False
        return max(state - 1, 0), self.step_reward, False

    def step(self, state, action):
        next_state, reward, terminal = self.model(state, action)
        self.steps += 1
        self.truncated = not terminal and self.steps >= self.max_steps
        return next_state, reward, terminal or self.truncated


class GridWorld:
    """w x h grid, start (0, 0). Actions: 0 up, 1 right, 2 down, 3 left.

    Entering ``goal`` pays 1 and terminates; other moves pay
    ``-step_penalty``. Moves off the grid leave the agent in place. States
    are numbered ``y * w + x``.
    """

    MOVES = ((0, -1), (1, 0), (0, 1), (-1, 0))

    def __init__(self, w: int = 3, h: int = 3, goal=(2, 2), step_penalty: float = 0.0, max_steps: int = 100):
        self.w, self.h = w, h
        self.goal = tuple(goal)
        self.step_penalty = step_penalty
        self.n_states = w * h
        self.n_actions = 4
        self.max_steps = max_steps
        self.steps = 0
        self.truncated = False

    def coords(self, state):
        return state % self.w, state // self.w

    def state_of(self, x, y):
        return y * self.w + x

    def reset(self, seed=None) -> int:
        self.steps = 0
        self.truncated = False
        return 0

    def model(self, state, action):
        if not 0 <= action < 4:
            raise InvalidAction(f"action {action} not in 0..3")
        x, y = self.coords(state)
        if (x, y) == self.goal:
            return state, 0.0, True
        dx, dy = self.MOVES[action]
        nx = min(max(x + dx, 0), self.w - 1)
        ny = min(max(y + dy, 0), self.h - 1)
        if (nx, ny) == self.goal:
            return self.state_of(nx, ny), 1.0, True
        return self.state_of(nx, ny), -self.step_penalty, False

    def step(self, state, action):
        next_state, reward, terminal = self.model(state, action)
        self.steps += 1
        self.truncated = not terminal and self.steps >= self.max_steps
        return next_state, reward, terminal or self.truncated


def chain_mdp(n: int = 5, **kwargs) -> ChainMDP:
    return ChainMDP(n, **kwargs)


def gridworld(w: int = 3, h: int = 3, goal=(2, 2), step_penalty: float = 0.0, **kwargs) -> GridWorld:
    return GridWorld(w, h, goal, step_penalty, **kwargs)


def value_iteration(env, gamma: float, tol: float = 1e-10, max_iter: int = 100_000) -> QTable:
    """Optimal Q of a deterministic MDP exposing ``model(state, action)``."""
    q = np.zeros((env.n_states, env.n_actions))
    for _ in range(max_iter):
        new = np.empty_like(q)
        for s in range(env.n_states):
            for a in range(env.n_actions):
                s2, r, done = env.model(s, a)
                new[s, a] = r if done else r + gamma * q[s2].max()
        delta = np.abs(new - q).max()
        q = new
        if delta < tol:
            break
    return QTable(q)


# -- training loop ------------------------------------------------------------

@dataclass
class TabularRun:
    q: QTable
    returns: list[float]
    epsilons: list[float]


def run_tabular_q(env, params: QLearnParams, seed: int = 0) -> TabularRun:
    """Epsilon-greedy Q-learning with replay and a periodically synced target table.

    Each environment step pushes the transition, samples a mini-batch and
    applies :func:`q_update` against the target table. The target is synced
    every ``target_sync_every`` steps and epsilon decays once per episode.
    Episodes cut off by the step cap are stored as non-terminal so the cap
    does not bias the values.
    """
    rng = np.random.default_rng(seed)
    q = QTable.zeros(env.n_states, env.n_actions)
    target = q.copy()
    buffer = ReplayBuffer(params.buffer_capacity)
    epsilon = params.epsilon_start
    returns, epsilons = [], []
    steps = 0
    for episode in range(params.episodes):
        state = env.reset(seed)
        total, done = 0.0, False
        while not done:
            action = epsilon_greedy(q.values[state], epsilon, rng)
            next_state, reward, done = env.step(state, action)
            buffer.push(Transition(state, action, reward, next_state, done and not env.truncated))
            for t in buffer.sample(params.batch_size, rng):
                q_update(q, t, params.alpha, params.gamma, target)
            steps += 1
            if steps % params.target_sync_every == 0:
                sync_target(q, target)
            total += reward
            state = next_state
        returns.append(total)
        epsilons.append(epsilon)
        epsilon = decay_epsilon(epsilon, params.epsilon_decay, params.epsilon_min)
    return TabularRun(q, returns, epsilons)


def write_returns_csv(run: TabularRun, path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["episode", "return", "epsilon"])
        for i, (ret, eps) in enumerate(zip(run.returns, run.epsilons)):
            writer.writerow([i, repr(float(ret)), repr(float(eps))])
