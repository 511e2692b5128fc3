"""Study suites and their registry."""
from functools import partial
from typing import Callable, Optional

from src.exceptions import UnknownEntryError
from src.experiments.table_four import table_four, table_row
from src.experiments.three_qubit import (
    cyclic_interlacing_bound,
    disconnected_certificate,
    random_study,
    table_one_two,
    table_three,
)
from src.experiments.two_qubit import classify_two_qubit, swap_study, swap_two_qubit
from src.models.search import OptimizerConfig, SearchMode
from src.models.study import StudyReport
from src.services.spectrum_engine import SpectrumEngine

StudyRunner = Callable[..., StudyReport]

STUDIES: dict[str, StudyRunner] = {
    "classify-2q": classify_two_qubit,
    "swap-2q": swap_study,
    "random-unrestricted": partial(random_study, mode=SearchMode.UNRESTRICTED),
    "random-cyclic": partial(random_study, mode=SearchMode.CYCLIC_BASIS),
    "table-i-ii": table_one_two,
    "table-iii": table_three,
    "table-iv": table_four,
    "disconnected": disconnected_certificate,
}


def run_study(
    study_id: str,
    config: Optional[OptimizerConfig] = None,
    seed: Optional[int] = None,
    engine: Optional[SpectrumEngine] = None,
) -> StudyReport:
    """
    Run a registered study.

    Args:
        study_id: Key of STUDIES
        config: Optimizer config shared by every instance
        seed: Overrides the config seed
        engine: Engine to reuse (its config wins over ``config``)

    Returns:
        StudyReport: The study's report

    Raises:
        UnknownEntryError: Unknown study id
    """
    runner = STUDIES.get(study_id)
    if runner is None:
        raise UnknownEntryError(f"Unknown study id: {study_id}")
    config = config or OptimizerConfig.from_settings()
    if seed is not None:
        config = config.model_copy(update={"seed": seed})
    return runner(engine=engine or SpectrumEngine(config))


__all__ = [
    "STUDIES",
    "run_study",
    "classify_two_qubit",
    "swap_two_qubit",
    "swap_study",
    "random_study",
    "table_one_two",
    "table_three",
    "cyclic_interlacing_bound",
    "table_row",
    "table_four",
    "disconnected_certificate",
]
