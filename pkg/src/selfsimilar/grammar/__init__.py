from .reduce import ReductionError, ReductionStuck, ReductionTrace, UnificationError, check_trace, reduce
from .semantics import (DimensionMismatch, Lexicon, Meaning, TraceMismatch, TypeMismatch, compare,
                        eval_matrix, evaluate_meaning, evaluate_meanings, inner_product, isometry_check,
                        load_shipped, name, unname)
from .types import (Base, LeftArrow, RightArrow, Tensor, TypeExpr, TypeSyntaxError, Unit, Var, parse_type,
                    show)
