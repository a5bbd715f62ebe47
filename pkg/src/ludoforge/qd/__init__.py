from .archive import Archive, CandidateRecord, QD_OFFSET
from .bandit import BanditStats, NoSites
from .loop import EmptyArchive, EvolveRun, StepReport, load_run, record_from_dict, record_to_dict

__all__ = [
    "Archive", "CandidateRecord", "QD_OFFSET",
    "BanditStats", "NoSites",
    "EmptyArchive", "EvolveRun", "StepReport", "load_run",
    "record_from_dict", "record_to_dict",
]
