from .concrete import CALCULI, parse_declarations, parse_raw, parse_type, show, tokenize
from .terms import *  # noqa: F401,F403
from .terms import (
    BOT, CO, COMP, PLAIN, VALUE, Name, Session, alpha_eq, canonical, erase, fill,
    free_names, rename, struct_subst, subst,
)
