"""The online avoidance game: random edge process, Painter strategies,
incremental monochromatic-copy detection, and transcript recording.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graphs import (
    Graph,
    SizeExceededError,
    _exists_copy_through_edge_adj,
    _find_copy_through_edge_adj,
    _norm_edge,
)
from .rng import SplitMix64, derive_seed

MAX_COLORS = 8

_PROCESS_TAG = 0x9D6E
_STRATEGY_TAG = 0x57A7


class DuplicateEdgeError(ValueError):
    """Edge already present on the board."""


@dataclass(frozen=True)
class GameConfig:
    """One fully seeded game: board size, pattern to avoid, colors, length
    cap, seed, and the Painter strategy."""

    n: int
    pattern: Graph
    colors: int
    max_rounds: int
    seed: int
    strategy: str = "greedy"
    preference: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("board needs at least 2 vertices")
        if not 1 <= self.colors <= MAX_COLORS:
            raise ValueError(f"colors must be in 1..{MAX_COLORS}")
        total = self.n * (self.n - 1) // 2
        if not 0 <= self.max_rounds <= total:
            raise ValueError(f"max_rounds must be in 0..{total}")
        if self.pattern.edge_count < 1:
            raise ValueError("pattern needs at least one edge")
        if self.preference is not None:
            object.__setattr__(self, "preference", tuple(self.preference))
            if sorted(self.preference) != list(range(1, self.colors + 1)):
                raise ValueError("preference must permute 1..colors")

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "pattern": {
                "vertices": self.pattern.vertex_count,
                "edges": sorted(self.pattern.edges),
            },
            "colors": self.colors,
            "max_rounds": self.max_rounds,
            "seed": self.seed,
            "strategy": self.strategy,
            "preference": list(self.preference) if self.preference else None,
        }


@dataclass(frozen=True)
class GameRecord:
    """Transcript summary of one game."""

    config: GameConfig
    duration: int
    survived: bool
    losing_copy: tuple[tuple[int, ...], int] | None
    color_histogram: tuple[int, ...]
    transcript: tuple[tuple[tuple[int, int], int], ...] | None = None

    def __post_init__(self):
        if self.survived != (self.losing_copy is None):
            raise ValueError("survived iff no losing copy")
        if sum(self.color_histogram) != self.duration:
            raise ValueError("histogram must sum to rounds played")

    def to_json_dict(self) -> dict:
        out = {
            "config": self.config.to_json_dict(),
            "duration": self.duration,
            "survived": self.survived,
            "losing_copy": None
            if self.losing_copy is None
            else {"vertices": list(self.losing_copy[0]), "color": self.losing_copy[1]},
            "color_histogram": list(self.color_histogram),
        }
        if self.transcript is not None:
            out["transcript"] = [
                {"round": i + 1, "edge": list(e), "color": c}
                for i, (e, c) in enumerate(self.transcript)
            ]
        return out


class ColoredBoard:
    """Edge-colored board: per-color adjacency plus the global edge map."""

    __slots__ = ("n", "colors", "adj", "edge_colors")

    def __init__(self, n: int, colors: int):
        self.n = n
        self.colors = colors
        self.adj = [[set() for _ in range(n)] for _ in range(colors)]
        self.edge_colors: dict[tuple[int, int], int] = {}

    def add(self, u: int, w: int, color: int) -> None:
        e = _norm_edge(u, w)
        if e in self.edge_colors:
            raise DuplicateEdgeError(f"edge {e} already on the board")
        self.edge_colors[e] = color
        a = self.adj[color - 1]
        a[e[0]].add(e[1])
        a[e[1]].add(e[0])

    def color_graph(self, color: int) -> Graph:
        return Graph.of(
            self.n, [e for e, c in self.edge_colors.items() if c == color]
        )

    def check_partition(self) -> bool:
        per_color = [0] * self.colors
        for c in self.edge_colors.values():
            per_color[c - 1] += 1
        degs = [sum(len(s) for s in a) for a in self.adj]
        return all(degs[i] == 2 * per_color[i] for i in range(self.colors))


def edge_count(n: int) -> int:
    return n * (n - 1) // 2


def _edge_from_index(n: int, idx: int) -> tuple[int, int]:
    # lexicographic (u, w) with u < w
    u = 0
    row = n - 1
    while idx >= row:
        idx -= row
        u += 1
        row -= 1
    return (u, u + 1 + idx)


def edge_process(n: int, seed: int):
    """Uniformly random permutation of all n(n-1)/2 edges, streamed lazily
    (partial Fisher-Yates, so only consumed prefixes cost time and memory)."""
    if n < 2:
        raise ValueError("need at least 2 vertices")
    rng = SplitMix64(seed)
    total = edge_count(n)
    swapped: dict[int, int] = {}
    for i in range(total):
        j = i + rng.randrange(total - i)
        vi = swapped.get(i, i)
        vj = swapped.get(j, j)
        swapped[j] = vi
        yield _edge_from_index(n, vj)


def closes_mono_copy(board: ColoredBoard, edge, color: int, pattern: Graph) -> bool:
    """Whether coloring `edge` with `color` completes a copy of the pattern
    inside that color class."""
    u, w = _norm_edge(*edge)
    if (u, w) in board.edge_colors:
        raise DuplicateEdgeError(f"edge ({u},{w}) already on the board")
    a = board.adj[color - 1]
    a[u].add(w)
    a[w].add(u)
    try:
        return _exists_copy_through_edge_adj(a, board.n, u, w, pattern)
    finally:
        a[u].discard(w)
        a[w].discard(u)


class GreedyStrategy:
    """First color in preference order that does not complete the pattern;
    when every color completes it, the last preferred color (the game then
    records the loss)."""

    def __init__(self, pattern: Graph, preference):
        self.pattern = pattern
        self.preference = tuple(preference)

    def choose(self, board: ColoredBoard, edge) -> int:
        for c in self.preference:
            if not closes_mono_copy(board, edge, c, self.pattern):
                return c
        return self.preference[-1]


class RandomStrategy:
    """Uniform color choice; the baseline control strategy."""

    def __init__(self, colors: int, rng: SplitMix64):
        self.colors = colors
        self.rng = rng

    def choose(self, board: ColoredBoard, edge) -> int:
        return self.rng.randrange(self.colors) + 1


STRATEGIES = ("greedy", "random")


def make_strategy(config: GameConfig, rng: SplitMix64):
    if config.strategy == "greedy":
        pref = config.preference or tuple(range(1, config.colors + 1))
        return GreedyStrategy(config.pattern, pref)
    if config.strategy == "random":
        return RandomStrategy(config.colors, rng)
    raise ValueError(f"unknown strategy {config.strategy!r}")


def play(config: GameConfig, record_transcript: bool = False) -> GameRecord:
    """Run one seeded game: stream random edges, ask the strategy for each
    color, stop at the first monochromatic copy or at max_rounds."""
    if config.pattern.vertex_count > 10:
        raise SizeExceededError("pattern capped at 10 vertices")
    process = edge_process(config.n, derive_seed(config.seed, _PROCESS_TAG))
    strategy = make_strategy(
        config, SplitMix64(derive_seed(config.seed, _STRATEGY_TAG))
    )
    board = ColoredBoard(config.n, config.colors)
    histogram = [0] * config.colors
    transcript = [] if record_transcript else None
    duration = config.max_rounds
    survived = True
    losing = None
    for round_no in range(1, config.max_rounds + 1):
        edge = next(process)
        color = strategy.choose(board, edge)
        loses = closes_mono_copy(board, edge, color, config.pattern)
        board.add(*edge, color)
        histogram[color - 1] += 1
        if transcript is not None:
            transcript.append((edge, color))
        if loses:
            adj = board.adj[color - 1]
            sample = _find_copy_through_edge_adj(
                adj, board.n, edge[0], edge[1], config.pattern
            )
            assert sample is not None
            losing = (tuple(sorted(sample)), color)
            duration = round_no
            survived = False
            break
    return GameRecord(
        config=config,
        duration=duration,
        survived=survived,
        losing_copy=losing,
        color_histogram=tuple(histogram),
        transcript=None if transcript is None else tuple(transcript),
    )
