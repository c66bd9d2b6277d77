from .config import StudyConfig, load_study_config, FLOW_CASE_COVS, \
    FLOW_M_AXIS, FLOW_Q_AXIS, FLOW_T_IN_AXIS, VALIDATION_Q_AXIS
from .metrics import metric_errors, error_series, cov, resample_zoh
from .flow import make_proportional_flow
from .plotscript import write_plot_script
from .study import StudyBase, StudyReport
from .studies import (
    scenario_lti_failure, scenario_lpv_validation, scenario_flow_study,
    run_ecm_coupled, simulate_coupled, validation_responses,
    validation_grid, flow_responses, flow_grid, coupled_grid,
    independent_lti_models, STUDIES)
from .runner import StudyRunner, study_runner
