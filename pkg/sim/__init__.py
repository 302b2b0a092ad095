from sim.gbm_study import run_gbm_study
from sim.generators import (
    LinearUniformTruth,
    NonlinearTruth,
    TwoSampleTruth,
    gen_linear_uniform,
    gen_nonlinear,
    gen_two_sample,
)
from sim.replication import ReplicationResult, run_replication
from sim.results import StudyResult, emit_results
from sim.two_sample_study import run_two_sample_study

__all__ = [
    "run_gbm_study", "LinearUniformTruth", "NonlinearTruth", "TwoSampleTruth",
    "gen_linear_uniform", "gen_nonlinear", "gen_two_sample",
    "ReplicationResult", "run_replication", "StudyResult", "emit_results", "run_two_sample_study",
]
