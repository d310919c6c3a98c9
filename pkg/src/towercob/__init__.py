"""Exact cohomology of projective-bundle towers and the characteristic numbers used to
certify polynomial generators of the unitary cobordism ring."""

from .ring import (ExactScalar, OwnershipError, MalformedBundleError, RingClass, RingError,
                   Stage, TowerRing, UnitError, extend_by_projectivization, integrate,
                   invert_unit, product_ring)
from .varieties import (LineClass, NegLineClass, TwistedBlock, Variety, bf_bundle, bounded_flag,
                        br_variety, dual_hypersurface_milnor, h_variety, l_variety, point,
                        product, projective_space, projectivize, projectivize_lines, x_variety,
                        y_variety, z_variety)
from .charnum import (Partition, ToddSeries, blowup_milnor, chern_number, closed_form_bf_milnor,
                      milnor_number, newton_power_sum, power_sum, todd_genus, total_chern)

__version__ = "0.1.0"
