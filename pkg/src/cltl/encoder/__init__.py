from .decode import DecodeError, assignment_from_dag, const_placement, decode, model_dict, unsatisfied
from .encode import (EncodingConfig, ProblemCnf, SoftLayer, VarMap, encode_full, encode_sample,
                     encode_semantics, encode_structure, sem_var)

__all__ = [
    "DecodeError", "EncodingConfig", "ProblemCnf", "SoftLayer", "VarMap", "assignment_from_dag",
    "const_placement", "decode", "encode_full", "encode_sample", "encode_semantics",
    "encode_structure", "model_dict", "sem_var", "unsatisfied",
]
