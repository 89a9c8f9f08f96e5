"""Block-Markov message schedules.

Message ``i`` of a stream with layers ``(Z_a, Z_b, ...)`` rides ``Z_a`` in
block ``i``, ``Z_b`` in block ``i + 1`` and so on. A stream spread over K
blocks carries ``b - K + 1`` messages in ``b`` blocks; the slots left over at
the edges carry a fixed message known to both receivers.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..regions.orders import split_streams

PAD = "1"


@dataclass(frozen=True)
class BlockSchedule:
    streams: dict
    blocks: int

    def __post_init__(self):
        for s in self.streams.values():
            if self.blocks < len(s):
                raise ValueError(f"{self.blocks} blocks cannot carry stream {s.name} spread over {len(s)} blocks")

    @classmethod
    def for_split(cls, k: int, l: int, blocks: int) -> "BlockSchedule":
        return cls(split_streams(k, l), blocks)

    def n_messages(self, stream: str) -> int:
        return self.blocks - len(self.streams[stream]) + 1

    def message_at(self, stream: str, layer: str, block: int):
        """Index of the message of ``stream`` on ``layer`` in ``block`` (1-based), or None for the pad."""
        st = self.streams[stream]
        i = block - st.layers.index(layer)
        return i if 1 <= i <= self.n_messages(stream) else None

    def blocks_of(self, stream: str, message: int) -> list:
        """``[(block, layer), ...]`` carrying ``message``, in codeword order."""
        return [(message + k, z) for k, z in enumerate(self.streams[stream].layers)]

    def rows(self) -> dict:
        """``layer -> [cell per block]`` with cells like ``m1(3)`` or the pad marker."""
        out = {}
        for name, st in self.streams.items():
            for z in reversed(st.layers):
                cells = []
                for j in range(1, self.blocks + 1):
                    i = self.message_at(name, z, j)
                    cells.append(PAD if i is None else f"{name}({i})")
                out[z] = cells
        return out

    def slot_counts(self) -> dict:
        """``(stream, message) -> number of layer-block slots`` over the whole schedule."""
        counts = {}
        for name, st in self.streams.items():
            for z in st.layers:
                for j in range(1, self.blocks + 1):
                    i = self.message_at(name, z, j)
                    if i is not None:
                        counts[(name, i)] = counts.get((name, i), 0) + 1
        return counts

    def dump(self) -> str:
        rows = self.rows()
        head = ["block"] + [str(j) for j in range(1, self.blocks + 1)]
        table = [head] + [[z] + cells for z, cells in rows.items()]
        widths = [max(len(r[c]) for r in table) for c in range(len(head))]
        return "\n".join("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() for r in table) + "\n"

