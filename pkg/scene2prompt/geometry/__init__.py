# -*- coding: utf-8 -*-
from .aabb_iou import aabb_iou
from .bbox_center import bbox_center, box_from_center
from .scene_bounds import scene_bounds
from .yaw_from_quaternion import quaternion_from_yaw, yaw_from_quaternion
