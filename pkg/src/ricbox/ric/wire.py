"""Fixed binary layout for E2-style indication and control messages.

All integers big-endian.

    header (17 B)  magic 0xE2 | version 0x01 | msg_type | node_id u16 | timestamp_slot u64 | payload_len u32
    indication     payload_len / 12 records: kpi_id u16 | subject_id u16 | value f64
    control        payload_len / 6 triples:  bs_id u16  | ue_id u16      | rgb_share u16

msg_type 0x01 is an indication, 0x02 a control message.  For a control
message ``node_id`` is the target node.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from enum import IntEnum

MAGIC = 0xE2
VERSION = 0x01
MSG_INDICATION = 0x01
MSG_CONTROL = 0x02

HEADER = struct.Struct(">BBBHQI")
RECORD = struct.Struct(">HHd")
TRIPLE = struct.Struct(">HHH")
HEADER_SIZE = HEADER.size  # 17
RECORD_SIZE = RECORD.size  # 12
TRIPLE_SIZE = TRIPLE.size  # 6

U16_MAX = 0xFFFF
U64_MAX = 0xFFFF_FFFF_FFFF_FFFF


class Kpi(IntEnum):
    USED_PRBS = 1
    AVAIL_PRBS = 2
    CONNECTED_UES = 3
    DL_RATE_MBPS = 4
    CQI = 5
    FAIRNESS = 6


KPI_IDS = frozenset(int(k) for k in Kpi)


class EncodeError(ValueError):
    pass


class DecodeError(ValueError):
    def __init__(self, offset: int, reason: str):
        self.offset = offset
        self.reason = reason
        super().__init__(f"{reason} at byte offset {offset}")


@dataclass(frozen=True)
class KpiRecord:
    kpi_id: int
    subject_id: int
    value: float


@dataclass(frozen=True)
class IndicationMessage:
    node_id: int
    timestamp_slot: int
    records: tuple[KpiRecord, ...]


@dataclass(frozen=True)
class ControlMessage:
    target_node_id: int
    timestamp_slot: int
    allocation: tuple[tuple[int, int, int], ...]  # (bs_id, ue_id, rgb_share)


Message = IndicationMessage | ControlMessage


def _u16(name: str, v: int) -> None:
    if not (isinstance(v, int) and 0 <= v <= U16_MAX):
        raise EncodeError(f"{name}={v!r} does not fit in u16")


def _header(kind: int, node: int, slot: int, payload_len: int) -> bytes:
    _u16("node_id", node)
    if not (isinstance(slot, int) and 0 <= slot <= U64_MAX):
        raise EncodeError(f"timestamp_slot={slot!r} does not fit in u64")
    return HEADER.pack(MAGIC, VERSION, kind, node, slot, payload_len)


def encode(msg: Message) -> bytes:
    if isinstance(msg, IndicationMessage):
        if not msg.records:
            raise EncodeError("indication must carry at least one KPI record")
        parts = [_header(MSG_INDICATION, msg.node_id, msg.timestamp_slot, RECORD_SIZE * len(msg.records))]
        for r in msg.records:
            if r.kpi_id not in KPI_IDS:
                raise EncodeError(f"kpi_id {r.kpi_id} not in registry")
            _u16("subject_id", r.subject_id)
            if not math.isfinite(r.value):
                raise EncodeError(f"non-finite value for kpi {r.kpi_id} subject {r.subject_id}")
            parts.append(RECORD.pack(r.kpi_id, r.subject_id, r.value))
        return b"".join(parts)
    if isinstance(msg, ControlMessage):
        parts = [_header(MSG_CONTROL, msg.target_node_id, msg.timestamp_slot, TRIPLE_SIZE * len(msg.allocation))]
        for bs, ue, share in msg.allocation:
            _u16("bs_id", bs)
            _u16("ue_id", ue)
            _u16("rgb_share", share)
            parts.append(TRIPLE.pack(bs, ue, share))
        return b"".join(parts)
    raise EncodeError(f"cannot encode {type(msg).__name__}")


def decode_at(data: bytes, offset: int = 0) -> tuple[Message, int]:
    """Decode one message starting at ``offset``; returns it and the offset just past it.

    Error offsets are absolute positions in ``data``.
    """
    mv = memoryview(data)
    end = len(mv)
    if end - offset < HEADER_SIZE:
        raise DecodeError(end, f"truncated header ({end - offset} of {HEADER_SIZE} bytes)")
    magic, version, kind, node, slot, plen = HEADER.unpack_from(mv, offset)
    if magic != MAGIC:
        raise DecodeError(offset, "bad magic")
    if version != VERSION:
        raise DecodeError(offset + 1, f"unsupported version {version}")
    if kind not in (MSG_INDICATION, MSG_CONTROL):
        raise DecodeError(offset + 2, f"unknown msg_type {kind}")
    body = offset + HEADER_SIZE
    unit = RECORD_SIZE if kind == MSG_INDICATION else TRIPLE_SIZE
    if plen % unit:
        raise DecodeError(offset + 13, f"payload_len {plen} is not a multiple of {unit}")
    if body + plen > end:
        raise DecodeError(end, f"truncated payload ({end - body} of {plen} bytes)")

    if kind == MSG_INDICATION:
        if plen == 0:
            raise DecodeError(offset + 13, "indication without records")
        records = []
        for pos in range(body, body + plen, RECORD_SIZE):
            kpi, subject, value = RECORD.unpack_from(mv, pos)
            if kpi not in KPI_IDS:
                raise DecodeError(pos, f"kpi_id {kpi} not in registry")
            if not math.isfinite(value):
                raise DecodeError(pos + 4, "non-finite KPI value")
            records.append(KpiRecord(kpi, subject, value))
        return IndicationMessage(node, slot, tuple(records)), body + plen

    triples = tuple(TRIPLE.unpack_from(mv, pos) for pos in range(body, body + plen, TRIPLE_SIZE))
    return ControlMessage(node, slot, triples), body + plen


def decode(data: bytes) -> Message:
    msg, stop = decode_at(data, 0)
    if stop != len(data):
        raise DecodeError(stop, f"{len(data) - stop} trailing bytes after message")
    return msg


def iter_messages(data: bytes):
    """Yield (offset, message) for a concatenation of messages (a spill file)."""
    off = 0
    while off < len(data):
        msg, nxt = decode_at(data, off)
        yield off, msg
        off = nxt
