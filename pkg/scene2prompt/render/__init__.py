# -*- coding: utf-8 -*-
from ._camera import CameraSpec, RenderConfig, RenderedView
from .plan_cameras import plan_cameras
from .project_point import project_point, project_points
from .render_scene import encode_png, render_scene, save_views, view_filename
from .render_view import render_view
