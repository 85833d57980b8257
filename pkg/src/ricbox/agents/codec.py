from __future__ import annotations

from ricbox.env.network import AllocationAction
from ricbox.errors import ContractError


class ActionCodec:
    """Maps a categorical policy index onto one slot's RGB grants.

    Index 0 is the null action (no grant).  Index ``1 + ue * n_bss + bs``
    grants ``quantum`` RGBs of BS ``bs`` to UE ``ue``.
    """

    def __init__(self, n_ues: int, n_bss: int, quantum: int):
        if n_ues < 1 or n_bss < 1 or quantum < 1:
            raise ContractError("codec needs n_ues, n_bss, quantum >= 1")
        self.n_ues = n_ues
        self.n_bss = n_bss
        self.quantum = quantum

    @property
    def n_actions(self) -> int:
        return 1 + self.n_ues * self.n_bss

    def decode(self, index: int) -> AllocationAction:
        if not 0 <= index < self.n_actions:
            raise ContractError(f"action index {index} outside [0, {self.n_actions})")
        if index == 0:
            return AllocationAction.empty()
        ue, bs = divmod(index - 1, self.n_bss)
        return AllocationAction(((bs, ue, self.quantum),))

    def encode(self, action: AllocationAction) -> int:
        grants = [g for g in action.grants if g[2] != 0]
        if not grants:
            return 0
        if len(grants) != 1 or grants[0][2] != self.quantum:
            raise ContractError(f"{action} is not representable by this codec")
        bs, ue, _ = grants[0]
        if not (0 <= bs < self.n_bss and 0 <= ue < self.n_ues):
            raise ContractError(f"{action} names an unknown UE or BS")
        return 1 + ue * self.n_bss + bs
