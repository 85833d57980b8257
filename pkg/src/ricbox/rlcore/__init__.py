from ricbox.rlcore.checkpoint import load_checkpoint, save_checkpoint
from ricbox.rlcore.distributions import greedy_action, log_prob_and_entropy, log_softmax, softmax, softmax_sample
from ricbox.rlcore.gradcheck import GradCheckReport, grad_check
from ricbox.rlcore.mlp import ForwardCache, Gradients, MlpParams, backward, forward, init_mlp, mlp_sizes, predict
from ricbox.rlcore.optim import AdamState, adam_step, clip_grad_norm

__all__ = [
    "AdamState", "ForwardCache", "GradCheckReport", "Gradients", "MlpParams", "adam_step", "backward",
    "clip_grad_norm", "forward", "grad_check", "greedy_action", "init_mlp", "load_checkpoint",
    "log_prob_and_entropy", "log_softmax", "mlp_sizes", "predict", "save_checkpoint", "softmax", "softmax_sample",
]
