"""Services - channel models, decoding and the analysis stack."""
from .code import GF2Encoder, ParityCheckCode, encode, load_alist, save_alist, syndrome
from .decoder import DecodeResult, LlrState, decode
from .design import FrontEndCurve, HighsSolver, optimize_rho, predict_threshold
from .frontend import FrontEnd, FrozenFrontEnd, QscFrontEnd, QscStarFrontEnd
from .harness import BerSimulator, run_ber, run_comparison_bsc_decomposition

__all__ = [
    "BerSimulator",
    "DecodeResult",
    "FrontEnd",
    "FrontEndCurve",
    "FrozenFrontEnd",
    "GF2Encoder",
    "HighsSolver",
    "LlrState",
    "ParityCheckCode",
    "QscFrontEnd",
    "QscStarFrontEnd",
    "decode",
    "encode",
    "load_alist",
    "optimize_rho",
    "predict_threshold",
    "run_ber",
    "run_comparison_bsc_decomposition",
    "save_alist",
    "syndrome",
]
