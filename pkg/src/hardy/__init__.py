"""
Hardy-core module
Condition states, the maximally nonlocal Hardy state, the general Hardy
family and closed-form q oracles
"""

from .checks import AppendixAReport, RankReport, appendix_a_check, rank_report
from .closed_forms import (
    Q_MAX,
    nested_overlap_q,
    optimal_theta,
    q_closed_form,
    q_coefficient_form,
    q_gradient_spin_half,
    q_overlap_form,
    q_symmetric_closed_form,
)
from .gram_schmidt import gram_schmidt, numerical_rank, project_out
from .scenario import BipartiteState, ConditionSet, HardyScenario, condition_states
from .states import (
    HardyFamily,
    HardyReport,
    condition_probabilities,
    general_hardy_state,
    hardy_family,
    hardy_state_max,
    q_from_projections,
    q_value,
    random_family_coefficients,
    sample_hardy_subspace,
    verify_hardy_conditions,
)

__all__ = [
    'AppendixAReport',
    'BipartiteState',
    'ConditionSet',
    'HardyFamily',
    'HardyReport',
    'HardyScenario',
    'Q_MAX',
    'RankReport',
    'appendix_a_check',
    'condition_probabilities',
    'condition_states',
    'general_hardy_state',
    'gram_schmidt',
    'hardy_family',
    'hardy_state_max',
    'nested_overlap_q',
    'numerical_rank',
    'optimal_theta',
    'project_out',
    'q_closed_form',
    'q_coefficient_form',
    'q_from_projections',
    'q_gradient_spin_half',
    'q_overlap_form',
    'q_symmetric_closed_form',
    'q_value',
    'random_family_coefficients',
    'rank_report',
    'sample_hardy_subspace',
    'verify_hardy_conditions',
]
