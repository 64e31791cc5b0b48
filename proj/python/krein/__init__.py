"""Positive and contractive extensions of partially defined operators."""

from ._krein import (
    ContractivePartial,
    KreinError,
    PartialOperator,
    ToleranceProfile,
    characterize_extension,
    check_solvable,
    dstar,
    extremal_extensions,
    gen_instance,
    has_bounded_psd_extension,
    interval_member,
    is_extension,
    kvn_extension,
    kvn_range_criterion,
    qform_tn,
    run,
    schur_oracle,
    short_to,
    shorted_qform,
    shorted_root_range,
    solve_min,
    sup_qform,
    theorem1_report,
    uniqueness,
)

__all__ = [name for name in dir() if not name.startswith("_")]
