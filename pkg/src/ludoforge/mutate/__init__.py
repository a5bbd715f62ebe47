from .request import MutationRequest, NoSites, make_request, mutation_sites
from .sampler import (
    GenerationBudgetExceeded,
    GrammarSampler,
    GrammarSamplerParams,
    SubtreeLibrary,
    grammar_mutate,
)
from .infill import (
    EmptyCompletion,
    EndpointError,
    InfillEndpointConfig,
    InfillTimeout,
    chat_modification_messages,
    infill_mutate,
    request_completion,
)
from .stats import MutationStats, mutation_stats, stats_table

__all__ = [
    "MutationRequest", "NoSites", "make_request", "mutation_sites",
    "GenerationBudgetExceeded", "GrammarSampler", "GrammarSamplerParams",
    "SubtreeLibrary", "grammar_mutate",
    "EmptyCompletion", "EndpointError", "InfillEndpointConfig", "InfillTimeout",
    "chat_modification_messages", "infill_mutate", "request_completion",
    "MutationStats", "mutation_stats", "stats_table",
]
