# -*- coding: utf-8 -*-
from math import atan2, degrees, floor, hypot, tau

from scene2prompt import CLOCK
from scene2prompt.utils import AgentSituation, DescriptionError


def hour_from_bearing(delta_degrees: float) -> int:
    """Hour of a clockwise bearing: half-open 30 degree sectors centered on each hour."""
    hour = floor((delta_degrees % 360.0 + 15.0) / 30.0) % CLOCK["HOURS"]
    return CLOCK["HOURS"] if hour == 0 else hour


def clock_hour(agent: AgentSituation, target_xy, **kwargs) -> int:
    """Describe: Clock Hour Bearing"""
    # Validate Arguments
    if not isinstance(agent, AgentSituation):
        raise DescriptionError("[X] clock_hour requires an AgentSituation")
    tx, ty = (float(v) for v in tuple(target_xy)[:2])
    dx, dy = tx - agent.position.x, ty - agent.position.y
    if hypot(dx, dy) <= CLOCK["MIN_DISTANCE"]:
        raise DescriptionError(f"[X] Target ({tx}, {ty}) coincides with the agent position")

    # Calculate Result
    delta = (agent.yaw - atan2(dy, dx)) % tau
    # snap float noise so exact sector edges land in the later sector
    return hour_from_bearing(round(degrees(delta), 9))


clock_hour.__doc__ = \
"""Clock Hour Bearing

Expresses the direction from the agent to a target on a 12-hour clock face:
12 is straight ahead, 3 is to the right, 6 behind and 9 to the left. Only
the xy-plane is considered; heights are ignored.

Sources:
    "To my 12 o'clock there is a <monitor>"

Calculation:
    theta = atan2(target.y - agent.y, target.x - agent.x)
    delta = (yaw - theta) mod 360 deg          (clockwise from facing)
    hour = floor((delta + 15) / 30) mod 12, 0 -> 12

    Sectors are half-open: a bearing of exactly 15 degrees is 1 o'clock.

Args:
    agent (AgentSituation): Position and yaw of the agent
    target_xy (sequence): Target x, y (a third coordinate is ignored)

Returns:
    int: The hour, 1 to 12

Raises:
    DescriptionError: target within 1e-9 m of the agent in the xy-plane
"""
