"""Linear deterministic relay networks and their min-cut capacity.

Every node transmits and receives a vector of ``q`` bits per channel use,
where ``q`` is the largest gain in the network. The signal received at node
``j`` is the GF(2) sum over all ``k`` of ``S**(q - n[k, j]) @ x[k]``.
The unicast capacity equals the minimum, over all source/destination cuts,
of the GF(2) rank of the cut's transfer matrix.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from detrelay.errors import ContractError, DomainError, NetworkFormatError, SizeLimitError
from detrelay.gf2 import BitMatrix, block_assemble, rank, shift_matrix

__all__ = [
    "MAX_RELAYS",
    "DetNetwork",
    "Cut",
    "transfer_step",
    "cut_matrix",
    "enumerate_cuts",
    "min_cut_capacity",
    "point_to_point",
    "relay_network",
    "diamond_network",
    "parse_network",
    "load_network",
    "format_network",
]

# exhaustive enumeration visits 2**(N - 2) cuts
MAX_RELAYS = 22

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class DetNetwork:
    """Immutable deterministic network with integer level gains.

    ``gains`` maps ``(tx, rx)`` pairs to nonnegative integers; absent pairs
    have gain 0. Node order fixes the block order of every transfer matrix.
    """

    def __init__(
        self,
        nodes: Sequence[str],
        source: str,
        destination: str,
        gains: Mapping[tuple[str, str], int],
    ):
        nodes = tuple(nodes)
        if len(set(nodes)) != len(nodes):
            raise DomainError("duplicate node identifiers")
        index = {v: i for i, v in enumerate(nodes)}
        if source not in index:
            raise DomainError(f"source {source!r} is not a node")
        if destination not in index:
            raise DomainError(f"destination {destination!r} is not a node")
        if source == destination:
            raise DomainError("source and destination must differ")
        clean: dict[tuple[str, str], int] = {}
        for (i, j), n in gains.items():
            if i not in index or j not in index:
                raise DomainError(f"gain ({i!r}, {j!r}) references an unknown node")
            if isinstance(n, bool) or int(n) != n or n < 0:
                raise DomainError(f"gain ({i!r}, {j!r}) = {n!r} must be a nonnegative integer")
            n = int(n)
            if i == j and n > 0:
                raise DomainError(f"self-loop gain on {i!r}")
            if n > 0:
                clean[(i, j)] = n
        self._nodes = nodes
        self._index = index
        self._source = source
        self._destination = destination
        self._gains = MappingProxyType(clean)
        self._q = max(clean.values(), default=1)

    @property
    def nodes(self) -> tuple[str, ...]:
        return self._nodes

    @property
    def source(self) -> str:
        return self._source

    @property
    def destination(self) -> str:
        return self._destination

    @property
    def gains(self) -> Mapping[tuple[str, str], int]:
        """Positive gains only."""
        return self._gains

    @property
    def q(self) -> int:
        return self._q

    @property
    def relays(self) -> tuple[str, ...]:
        return tuple(v for v in self._nodes if v not in (self._source, self._destination))

    def gain(self, tx: str, rx: str) -> int:
        return self._gains.get((tx, rx), 0)

    def index(self, node: str) -> int:
        return self._index[node]

    def channel(self, tx: str, rx: str) -> Optional[BitMatrix]:
        """The ``q x q`` block from ``tx`` to ``rx``, or None for a zero gain."""
        n = self.gain(tx, rx)
        if n == 0:
            return None
        return shift_matrix(self._q, self._q - n)

    def with_gain(self, tx: str, rx: str, n: int) -> "DetNetwork":
        g = dict(self._gains)
        g[(tx, rx)] = n
        return DetNetwork(self._nodes, self._source, self._destination, g)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DetNetwork):
            return NotImplemented
        return (
            self._nodes == other._nodes
            and self._source == other._source
            and self._destination == other._destination
            and dict(self._gains) == dict(other._gains)
        )

    def __repr__(self) -> str:
        return (
            f"DetNetwork(nodes={list(self._nodes)}, source={self._source!r}, "
            f"destination={self._destination!r}, gains={dict(self._gains)})"
        )


@dataclass(frozen=True)
class Cut:
    """One source/destination bipartition with its transfer matrix and rank.

    ``mask`` has bit ``i`` set when the ``i``-th relay (declaration order)
    is on the source side.
    """

    omega: tuple[str, ...]
    omega_c: tuple[str, ...]
    matrix: BitMatrix
    value: int
    mask: int


def transfer_step(net: DetNetwork, transmits: Mapping[str, Sequence[int]]) -> dict[str, list[int]]:
    """One channel use: map each node's transmit vector to every node's received vector."""
    q = net.q
    x: dict[str, int] = {}
    for node, vec in transmits.items():
        if node not in net._index:
            raise ContractError(f"unknown node {node!r}")
        if len(vec) != q:
            raise ContractError(f"transmit vector of {node!r} has length {len(vec)}, expected {q}")
        packed = 0
        for i, b in enumerate(vec):
            if b not in (0, 1):
                raise ContractError(f"transmit vector of {node!r} holds non-bit {b!r}")
            if b:
                packed |= 1 << i
        x[node] = packed
    received = {}
    for j in net.nodes:
        y = 0
        for k in net.nodes:
            n = net.gain(k, j)
            if n and x.get(k):
                # S**(q-n) moves level i to level i + q - n and drops the rest
                y ^= (x[k] << (q - n)) & ((1 << q) - 1)
        received[j] = [(y >> i) & 1 for i in range(q)]
    return received


def _mask_for(net: DetNetwork, omega_set: set[str]) -> int:
    mask = 0
    for i, v in enumerate(net.relays):
        if v in omega_set:
            mask |= 1 << i
    return mask


def cut_matrix(net: DetNetwork, omega: Iterable[str]) -> Cut:
    """Transfer matrix from the transmitters in ``omega`` to the receivers outside it.

    Block ``(j, k)`` is the channel from transmitter ``k`` to receiver ``j``;
    both sides follow the network's node order.
    """
    omega_set = set(omega)
    unknown = omega_set.difference(net.nodes)
    if unknown:
        raise DomainError(f"cut side names unknown nodes {sorted(unknown)}")
    if net.source not in omega_set:
        raise DomainError(f"cut side must contain the source {net.source!r}")
    if net.destination in omega_set:
        raise DomainError(f"cut side must exclude the destination {net.destination!r}")
    tx = tuple(v for v in net.nodes if v in omega_set)
    rx = tuple(v for v in net.nodes if v not in omega_set)
    q = net.q
    blocks = [[net.channel(k, j) for k in tx] for j in rx]
    m = block_assemble(blocks, [q] * len(rx), [q] * len(tx))
    return Cut(tx, rx, m, rank(m), _mask_for(net, omega_set))


def enumerate_cuts(net: DetNetwork) -> Iterator[Cut]:
    """Yield every cut once, ordered by relay membership bitmask."""
    relays = net.relays
    if len(relays) > MAX_RELAYS:
        raise SizeLimitError(
            f"{len(relays)} relays exceed the exhaustive-enumeration limit of {MAX_RELAYS} "
            f"(at most {MAX_RELAYS + 2} nodes)"
        )
    for mask in range(1 << len(relays)):
        side = {net.source}
        side.update(v for i, v in enumerate(relays) if mask >> i & 1)
        yield cut_matrix(net, side)


def min_cut_capacity(net: DetNetwork) -> tuple[int, Cut]:
    """Minimum cut rank and the minimizing cut with the smallest bitmask."""
    best: Optional[Cut] = None
    for cut in enumerate_cuts(net):
        if best is None or cut.value < best.value:
            best = cut
            if best.value == 0:
                break
    assert best is not None
    return best.value, best


def point_to_point(n: int) -> DetNetwork:
    return DetNetwork(["S", "D"], "S", "D", {("S", "D"): n})


def relay_network(n_sr: int, n_sd: int, n_rd: int) -> DetNetwork:
    return DetNetwork(
        ["S", "R", "D"], "S", "D", {("S", "R"): n_sr, ("S", "D"): n_sd, ("R", "D"): n_rd}
    )


def diamond_network(n_sa1: int, n_sa2: int, n_a1d: int, n_a2d: int) -> DetNetwork:
    return DetNetwork(
        ["S", "A1", "A2", "D"],
        "S",
        "D",
        {("S", "A1"): n_sa1, ("S", "A2"): n_sa2, ("A1", "D"): n_a1d, ("A2", "D"): n_a2d},
    )


def parse_network(text: str) -> DetNetwork:
    """Parse the line-oriented network format.

    Directives: ``node <id>``, ``source <id>``, ``dest <id>``,
    ``edge <from> <to> <n>``. ``#`` starts a comment. Node declaration order
    fixes matrix block order.
    """
    nodes: list[str] = []
    declared: set[str] = set()
    refs: list[tuple[str, int]] = []
    source = dest = None
    gains: dict[tuple[str, str], int] = {}

    def ident(tok: str, lineno: int) -> str:
        if not _IDENT.match(tok):
            raise NetworkFormatError(f"invalid node identifier {tok!r}", lineno)
        return tok

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kw, args = parts[0], parts[1:]
        if kw == "node":
            if len(args) != 1:
                raise NetworkFormatError("usage: node <id>", lineno)
            v = ident(args[0], lineno)
            if v in declared:
                raise NetworkFormatError(f"node {v!r} declared twice", lineno)
            declared.add(v)
            nodes.append(v)
        elif kw in ("source", "dest"):
            if len(args) != 1:
                raise NetworkFormatError(f"usage: {kw} <id>", lineno)
            v = ident(args[0], lineno)
            if kw == "source":
                if source is not None:
                    raise NetworkFormatError("source given twice", lineno)
                source = v
            else:
                if dest is not None:
                    raise NetworkFormatError("dest given twice", lineno)
                dest = v
            refs.append((v, lineno))
        elif kw == "edge":
            if len(args) != 3:
                raise NetworkFormatError("usage: edge <from> <to> <n>", lineno)
            a, b = ident(args[0], lineno), ident(args[1], lineno)
            try:
                n = int(args[2])
            except ValueError:
                raise NetworkFormatError(f"gain {args[2]!r} is not an integer", lineno) from None
            if n < 0:
                raise NetworkFormatError(f"gain {n} is negative", lineno)
            if a == b:
                raise NetworkFormatError(f"self-loop on {a!r}", lineno)
            if (a, b) in gains:
                raise NetworkFormatError(f"duplicate edge {a} -> {b}", lineno)
            gains[(a, b)] = n
            refs.append((a, lineno))
            refs.append((b, lineno))
        else:
            raise NetworkFormatError(f"unknown directive {kw!r}", lineno)

    for v, lineno in refs:
        if v not in declared:
            raise NetworkFormatError(f"undeclared node {v!r}", lineno)
    if source is None:
        raise NetworkFormatError("missing 'source' directive")
    if dest is None:
        raise NetworkFormatError("missing 'dest' directive")
    if source == dest:
        raise NetworkFormatError("source and dest must differ")
    return DetNetwork(nodes, source, dest, gains)


def load_network(path) -> DetNetwork:
    return parse_network(Path(path).read_text(encoding="utf-8"))


def format_network(net: DetNetwork) -> str:
    lines = [f"node {v}" for v in net.nodes]
    lines.append(f"source {net.source}")
    lines.append(f"dest {net.destination}")
    for (a, b), n in net.gains.items():
        lines.append(f"edge {a} {b} {n}")
    return "\n".join(lines) + "\n"
