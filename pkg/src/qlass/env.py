"""A labeled dataset presented as an episodic environment.

States are feature rows, actions are class indices, and the reward is +1
for naming the row's true class and -1 otherwise. One episode is one
shuffled pass over the rows.
"""
from __future__ import annotations

import numpy as np

from .errors import DataError, EpisodeExhausted, InvalidAction

CORRECT_REWARD = 1.0
WRONG_REWARD = -1.0


class ClassificationEnv:
    def __init__(self, features, labels, n_classes: int | None = None, episode_seed: int = 0):
        self.features = np.asarray(features, dtype=float)
        self.labels = np.asarray(labels, dtype=np.int64)
        if len(self.features) == 0 or len(self.features) != len(self.labels):
            raise DataError("environment needs a non-empty dataset with one label per row")
        self.n_classes = int(n_classes if n_classes is not None else self.labels.max() + 1)
        self.episode_seed = episode_seed
        self.order = np.arange(len(self.labels))
        self.cursor = len(self.labels)
        self._sentinel = np.zeros(self.features.shape[1])

    @classmethod
    def from_dataset(cls, dataset, episode_seed: int = 0) -> "ClassificationEnv":
        return cls(dataset.features, dataset.labels, dataset.n_classes or None, episode_seed)

    @property
    def n_rows(self) -> int:
        return len(self.labels)

    @property
    def n_actions(self) -> int:
        return self.n_classes

    @property
    def done(self) -> bool:
        return self.cursor >= self.n_rows

    @property
    def current_row(self) -> int:
        return int(self.order[self.cursor])

    @property
    def current_label(self) -> int:
        return int(self.labels[self.order[self.cursor]])

    def reset(self, episode_index: int = 0) -> np.ndarray:
        rng = np.random.default_rng([self.episode_seed, episode_index])
        self.order = rng.permutation(self.n_rows)
        self.cursor = 0
        return self.features[self.order[0]]

    def step(self, action: int):
        """Score ``action`` against the current row and advance.

        Returns ``(next_state, reward, terminal)``; after the last row the
        next state is an all-zero sentinel.
        """
        if self.done:
            raise EpisodeExhausted("episode finished; call reset()")
        if not 0 <= action < self.n_classes:
            raise InvalidAction(f"action {action} outside 0..{self.n_classes - 1}")
        reward = CORRECT_REWARD if action == self.current_label else WRONG_REWARD
        self.cursor += 1
        if self.done:
            return self._sentinel.copy(), reward, True
        return self.features[self.order[self.cursor]], reward, False
