from mfc_engine.engine.estimators import (
    StepRecord,
    offline_critic_delta,
    offline_policy_gradient,
    online_deltas,
    returns_to_go,
)
from mfc_engine.engine.report import TrainReport
from mfc_engine.engine.rollout import EpisodeTrace, RolloutStreams, initial_measures, rollout
from mfc_engine.engine.trainers import (
    OfflineTrainer,
    OnlineTrainer,
    TrainConfig,
    Trainer,
    clip_by_norm,
    train_offline,
    train_online,
)
