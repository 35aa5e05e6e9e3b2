"""Built-in per-language parameter presets for the detection and ranking tasks."""

from __future__ import annotations

from dataclasses import dataclass

from .clustering import ClusterParams, TwoPassParams
from .detection import DetectionConfig
from .store import DataError

DEFAULT_K = 14
DEFAULT_MIN_NEIGHBOR_TOKENS = 5
DEFAULT_T_CS = 0.40  # cross-lingual threshold, shared across language pairs


@dataclass(frozen=True)
class LanguagePreset:
    language: str
    t0_sc: float
    t1_sc: float
    k: int = DEFAULT_K
    t0_low: int = 5
    t1_low: int = 0

    def cluster_params(self, ranking: bool = False) -> TwoPassParams:
        # ranking keeps every token: no noise pruning in either pass
        t0_low = 0 if ranking else self.t0_low
        t1_low = 0 if ranking else self.t1_low
        return TwoPassParams(ClusterParams(self.t0_sc, t0_low),
                             ClusterParams(self.t1_sc, t1_low))

    def detection_config(self, metric: str = "neighbor_based",
                         strategy: str = "time_dependent",
                         ranking: bool = False) -> DetectionConfig:
        return DetectionConfig(
            t_sc=self.t1_sc,
            cluster_params=self.cluster_params(ranking=ranking),
            k=self.k,
            metric=metric,
            strategy=strategy,
            min_neighbor_tokens=DEFAULT_MIN_NEIGHBOR_TOKENS,
        )


LANGUAGE_PRESETS = {
    "en": LanguagePreset("en", 0.34, 0.40),
    "de": LanguagePreset("de", 0.22, 0.38),
    "la": LanguagePreset("la", 0.16, 0.16),
    "sv": LanguagePreset("sv", 0.28, 0.32),
}


def preset_for(language: str) -> LanguagePreset:
    try:
        return LANGUAGE_PRESETS[language]
    except KeyError:
        raise DataError(f"no preset for language {language!r}; "
                        f"known: {', '.join(sorted(LANGUAGE_PRESETS))}") from None
