"""Random linear coding on layered deterministic networks.

A block of ``K`` channel uses is coded jointly: every relay multiplies its
stacked ``Kq``-bit received block by a random ``Kq x Kq`` matrix and
transmits the result. The rank of the source-to-destination map is the
number of bits per block the scheme delivers; divided by ``K`` it can never
exceed the min-cut capacity.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from detrelay.detnet import DetNetwork, min_cut_capacity
from detrelay.errors import ContractError, LayeringError
from detrelay.gf2 import BitMatrix, mat_add, mat_mul, random_matrix, rank

__all__ = ["LayeredSchedule", "CodingTrial", "validate_layered", "run_trial", "estimate_rate"]


@dataclass(frozen=True)
class LayeredSchedule:
    layers: tuple[tuple[str, ...], ...]

    @property
    def depth(self) -> dict[str, int]:
        return {v: d for d, layer in enumerate(self.layers) for v in layer}


@dataclass(frozen=True)
class CodingTrial:
    block_length: int
    seed: int
    encoders: dict
    achieved_rank: int

    @property
    def rate(self) -> float:
        return self.achieved_rank / self.block_length


def validate_layered(net: DetNetwork) -> LayeredSchedule:
    """Partition nodes into layers by hop distance from the source.

    Depth is the longest path from the source, which equals every path
    length in a layered network and pins a skip link on the link itself.
    Raises ``LayeringError`` for cycles, unreachable nodes, links that do not
    go from one layer to the next, or a destination that is not alone in
    the last layer.
    """
    succ = {v: [w for w in net.nodes if net.gain(v, w)] for v in net.nodes}
    reach = {net.source}
    queue = deque([net.source])
    while queue:
        u = queue.popleft()
        for v in succ[u]:
            if v not in reach:
                reach.add(v)
                queue.append(v)
    if net.destination not in reach:
        raise LayeringError(f"destination {net.destination!r} is unreachable from the source")
    for v in net.nodes:
        if v not in reach:
            raise LayeringError(f"node {v!r} is unreachable from the source")

    indeg = {v: 0 for v in net.nodes}
    for (a, b) in net.gains:
        indeg[b] += 1
    depth = {}
    done = set()
    ready = deque(v for v in net.nodes if indeg[v] == 0)
    for v in ready:
        depth[v] = 0
    while ready:
        u = ready.popleft()
        done.add(u)
        for v in succ[u]:
            depth[v] = max(depth.get(v, 0), depth[u] + 1)
            indeg[v] -= 1
            if indeg[v] == 0:
                ready.append(v)
    if len(done) < len(net.nodes):
        # every unfinished node has an incoming link from another unfinished node
        a, b = next((a, b) for (a, b) in net.gains if a not in done and b not in done)
        raise LayeringError(f"edge {a} -> {b} lies on a cycle", edge=(a, b))

    for (a, b) in net.gains:
        if depth[b] != depth[a] + 1:
            raise LayeringError(
                f"skip edge {a} -> {b} (layer {depth[a]} to layer {depth[b]})", edge=(a, b)
            )
    last = depth[net.destination]
    layers = [[] for _ in range(max(depth.values()) + 1)]
    for v in net.nodes:
        layers[depth[v]].append(v)
    if len(layers) - 1 != last or len(layers[last]) != 1:
        others = [v for v in net.nodes if v != net.destination and depth[v] >= last]
        raise LayeringError(
            f"destination must be alone in the last layer; also at or beyond it: {others}"
        )
    return LayeredSchedule(tuple(tuple(layer) for layer in layers))


def _block_channel(net: DetNetwork, tx: str, rx: str, k: int) -> BitMatrix:
    """``I_K (x) S**(q-n)``: the channel applied independently to each of ``k`` uses."""
    q = net.q
    n = net.gain(tx, rx)
    shift = q - n
    rows = []
    for t in range(k):
        for i in range(q):
            rows.append(1 << (t * q + i - shift) if i >= shift else 0)
    return BitMatrix(k * q, k * q, rows)


def _encoder_seed(seed: int, relay_index: int) -> int:
    # distinct, reproducible stream per relay
    return seed * 1_000_003 + relay_index


def run_trial(net: DetNetwork, sched: LayeredSchedule, K: int, seed: int) -> CodingTrial:
    """One random code: compose channel blocks and relay encoders layer by layer."""
    if K < 1:
        raise ContractError(f"block length must be >= 1, got {K}")
    if seed < 0:
        raise ContractError(f"seed must be >= 0, got {seed}")
    kq = K * net.q
    relays = net.relays
    encoders = {
        v: random_matrix(kq, kq, _encoder_seed(seed, i)) for i, v in enumerate(relays)
    }
    # map from the source block to each node's transmitted block
    sent = {net.source: BitMatrix.identity(kq)}
    received = None
    for layer, nxt in zip(sched.layers, sched.layers[1:]):
        for v in nxt:
            y = BitMatrix.zeros(kq, kq)
            for u in layer:
                if net.gain(u, v):
                    y = mat_add(y, mat_mul(_block_channel(net, u, v, K), sent[u]))
            if v == net.destination:
                received = y
            else:
                sent[v] = mat_mul(encoders[v], y)
    assert received is not None
    return CodingTrial(K, seed, encoders, rank(received))


def estimate_rate(
    net: DetNetwork, sched: LayeredSchedule, K: int, trials: int, seed0: int
) -> tuple[float, float]:
    """Best and mean ``rank / K`` over seeds ``seed0 .. seed0 + trials - 1``."""
    if trials < 1:
        raise ContractError(f"trials must be >= 1, got {trials}")
    rates = [run_trial(net, sched, K, seed0 + s).rate for s in range(trials)]
    return max(rates), sum(rates) / len(rates)


def capacity(net: DetNetwork) -> int:
    return min_cut_capacity(net)[0]
