from . import box, dof, tet
from .dof import DofFunctional, FieldBundle, FiniteElementDef
