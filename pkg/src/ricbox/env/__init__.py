from ricbox.env.channel import (
    ChannelConfig,
    McsEntry,
    cqi_to_mcs,
    data_rate,
    mcs_table,
    snr_db,
    snr_to_cqi,
)
from ricbox.env.network import (
    AllocationAction,
    BaseStation,
    NetworkState,
    RanEnv,
    ScenarioConfig,
    StepMetrics,
    UserEquipment,
    observe,
)
from ricbox.env.render import SceneDescription, SceneLog, read_scenes, render

__all__ = [
    "AllocationAction", "BaseStation", "ChannelConfig", "McsEntry", "NetworkState", "RanEnv",
    "ScenarioConfig", "SceneDescription", "SceneLog", "StepMetrics", "UserEquipment",
    "cqi_to_mcs", "data_rate", "mcs_table", "observe", "read_scenes", "render", "snr_db", "snr_to_cqi",
]
