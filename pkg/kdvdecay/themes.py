# -*- coding: utf-8 -*-

"""
kdvdecay.themes
~~~~~~~~~~~~~~~

This module contains the themes of the report figures.

"""

__all__ = ('StandardTheme', 'DarkTheme', 'THEMES')

from .base import Theme

from typing import Dict

#-------------------------------------------------------------------------------

StandardTheme = Theme(
    figure_background_color=(255, 255, 255),

    spine_box_width_perc=0.78,
    spine_box_height_perc=0.7,
    spine_color=(0, 0, 0),
    spine_width=3,

    grid_visibility=True,
    grid_line_color=(220, 220, 220),
    grid_line_width=1,

    tick_length_perc=0.0075,
    tick_line_color=(0, 0, 0),
    tick_line_width=2,
    tick_label_color=(0, 0, 0),
    tick_label_size_perc=0.018,

    title_color=(0, 0, 0),
    title_size_perc=0.028,
    legend_color=(0, 0, 0),
    legend_size_perc=0.018,
    line_colors=((31, 119, 180), (214, 39, 40), (44, 160, 44), (255, 127, 14),
                 (148, 103, 189), (140, 86, 75)),
)

DarkTheme = Theme(
    figure_background_color=(24, 24, 28),

    spine_box_width_perc=0.78,
    spine_box_height_perc=0.7,
    spine_color=(200, 200, 200),
    spine_width=3,

    grid_visibility=True,
    grid_line_color=(60, 60, 66),
    grid_line_width=1,

    tick_length_perc=0.0075,
    tick_line_color=(200, 200, 200),
    tick_line_width=2,
    tick_label_color=(220, 220, 220),
    tick_label_size_perc=0.018,

    title_color=(240, 240, 240),
    title_size_perc=0.028,
    legend_color=(220, 220, 220),
    legend_size_perc=0.018,
    line_colors=((102, 194, 255), (255, 110, 110), (120, 220, 120), (255, 190, 90)),
)

THEMES: Dict[str, Theme] = {'standard': StandardTheme, 'dark': DarkTheme}

#-------------------------------------------------------------------------------
