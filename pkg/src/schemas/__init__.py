from .simulation import (
    SimConfig,
    ChannelScheme,
    PowerScheme,
    SchemeId,
    SweepAxis,
    SweepSpec,
    SCHEME_PRESETS,
    BUDGET_COMPLIANT_POWER,
    parse_schemes,
)
from .reports import (
    ViolationRecord,
    DeltaRateRecord,
    RateReport,
    OuterIterationRecord,
    PowerTraceRecord,
    ScenarioDump,
    GainTableDump,
    OracleResult,
    ResultRow,
    RESULT_COLUMNS,
    SchemeRunReport,
    SingleRunReport,
    OracleGapRow,
    OracleGapReport,
)
