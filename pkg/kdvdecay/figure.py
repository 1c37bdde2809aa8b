# -*- coding: utf-8 -*-

"""
kdvdecay.figure
~~~~~~~~~~~~~~~

This module contains SeriesFigure, the Pillow renderer behind
`kdvdecay report --plots`, and `plot_report`, which draws every series of a
report into its own PNG.

"""

__all__ = ('SeriesFigure', 'plot_report', 'get_font')

from .base import Theme, Axes, Size, Coords, Point, ExperimentReport
from .themes import StandardTheme
from .ticker import Locator, Formatter, AutoLocator, ScalarFormatter, padded_limits
from .records import series_filename

from numpy.typing import ArrayLike
from typing import Dict, List, Optional, Tuple, Union
from pathlib import Path
from PIL import Image, ImageDraw, ImageFont
import numpy as np
import logging
import gc

logger = logging.getLogger(__name__)

#-------------------------------------------------------------------------------

def get_font(size_perc: float, image_width: int) -> ImageFont.ImageFont:
    """Pillow's bundled font scaled to the image width."""
    return ImageFont.load_default(size=max(8, int(size_perc * image_width)))

def get_text_dimensions(draw: ImageDraw.ImageDraw, text: str, font) -> Size:
    left, top, right, bottom = draw.textbbox((0, 0), text, font=font)
    return Size(int(right - left), int(bottom - top))

def _segments(points: np.ndarray) -> List[List[Tuple[float, float]]]:
    """Split a polyline at non-finite points."""
    segments, current = [], []
    for x, y in points:
        if np.isfinite(x) and np.isfinite(y):
            current.append((float(x), float(y)))
        elif current:
            segments.append(current)
            current = []
    if current:
        segments.append(current)
    return segments

#-------------------------------------------------------------------------------

class SeriesFigure(object):

    def __init__(self, size: Size = (1200, 800), theme: Theme = StandardTheme):
        """
        Line plots of (t, value) series on linear axes:

            fig = SeriesFigure()
            fig.plot(times, log_norms, label='scheduled')
            fig.title('weighted norm')
            fig.save('norm.png')

        The image is drawn at twice the requested size and downsampled on save.

        """

        self.width = size[0] * 2
        self.height = size[1] * 2
        self.theme = theme

        self.img = None
        self.draw = None
        self.axes: List[Axes] = list()

        box_width = self.width * theme.spine_box_width_perc
        box_height = self.height * theme.spine_box_height_perc
        left = (self.width - box_width) / 2 * 1.25
        top = (self.height - box_height) / 2 / 1.2
        self.box = Coords(left, top, left + box_width, top + box_height)
        self.tick_length = box_width * theme.tick_length_perc

        # user choices survive renders, the active pair is rebuilt on each one
        self._locators: Dict[str, Optional[Locator]] = {'x': None, 'y': None}
        self._formatters: Dict[str, Optional[Formatter]] = {'x': None, 'y': None}
        self.x_locator: Optional[Locator] = None
        self.y_locator: Optional[Locator] = None
        self.x_formatter: Optional[Formatter] = None
        self.y_formatter: Optional[Formatter] = None

        self.x_ticks = np.empty(0)
        self.y_ticks = np.empty(0)
        self.limits = ((0.0, 1.0), (0.0, 1.0))

    def _create_empty_image(self, _mode: str = 'RGB') -> None:
        if self.img:
            self.img.close()
        self.img = Image.new(_mode, (self.width, self.height),
                             color=self.theme.figure_background_color)
        self.draw = ImageDraw.Draw(self.img)

    def _configure_axis(self, values: np.ndarray, locator: Optional[Locator],
                        formatter: Optional[Formatter]) -> Tuple[np.ndarray, Tuple[float, float],
                                                                 Locator, Formatter]:
        vmin, vmax = padded_limits(values)
        locator = locator or AutoLocator()
        ticks = np.asarray(locator.tick_values(vmin, vmax), dtype=float)
        lo, hi = min(vmin, float(np.min(ticks))), max(vmax, float(np.max(ticks)))
        formatter = formatter or ScalarFormatter(span=hi - lo)
        return ticks, (lo, hi), locator, formatter

    def _configure_grid_settings(self) -> None:
        """Tick positions and data limits of both axes over every plotted series."""
        xvalues = np.concatenate([axes.xvalues for axes in self.axes])
        yvalues = np.concatenate([axes.yvalues for axes in self.axes])

        self.x_ticks, x_limits, self.x_locator, self.x_formatter = \
            self._configure_axis(xvalues, self._locators['x'], self._formatters['x'])
        self.y_ticks, y_limits, self.y_locator, self.y_formatter = \
            self._configure_axis(yvalues, self._locators['y'], self._formatters['y'])
        self.limits = (x_limits, y_limits)

    def to_pixels(self, x: ArrayLike, y: ArrayLike) -> np.ndarray:
        (x0, x1), (y0, y1) = self.limits
        box = self.box
        px = box.x0 + (np.asarray(x, dtype=float) - x0) / (x1 - x0) * (box.x1 - box.x0)
        py = box.y1 - (np.asarray(y, dtype=float) - y0) / (y1 - y0) * (box.y1 - box.y0)
        return np.dstack([px, py])[0]

    def _draw_spines(self) -> None:
        box = self.box
        for spine in ((box.x0, box.y0, box.x0, box.y1), (box.x0, box.y0, box.x1, box.y0),
                      (box.x1, box.y0, box.x1, box.y1), (box.x0, box.y1, box.x1, box.y1)):
            self.draw.line(xy=spine, fill=self.theme.spine_color, width=self.theme.spine_width)

    def _draw_grid_and_ticks(self) -> None:
        box, theme = self.box, self.theme
        font = get_font(theme.tick_label_size_perc, self.width)
        (x0, x1), (y0, y1) = self.limits

        for value in self.x_ticks:
            if not x0 <= value <= x1:
                continue
            px = self.to_pixels([value], [y0])[0][0]
            if theme.grid_visibility:
                self.draw.line((px, box.y0, px, box.y1), fill=theme.grid_line_color,
                               width=theme.grid_line_width)
            self.draw.line((px, box.y1, px, box.y1 + self.tick_length),
                           fill=theme.tick_line_color, width=theme.tick_line_width)
            label = self.x_formatter(value)
            if label:
                height = get_text_dimensions(self.draw, label, font).height
                self.draw.text((px, box.y1 + 2 * self.tick_length + height / 2), label,
                               font=font, anchor='mm', fill=theme.tick_label_color)

        for value in self.y_ticks:
            if not y0 <= value <= y1:
                continue
            py = self.to_pixels([x0], [value])[0][1]
            if theme.grid_visibility:
                self.draw.line((box.x0, py, box.x1, py), fill=theme.grid_line_color,
                               width=theme.grid_line_width)
            self.draw.line((box.x0 - self.tick_length, py, box.x0, py),
                           fill=theme.tick_line_color, width=theme.tick_line_width)
            label = self.y_formatter(value)
            if label:
                self.draw.text((box.x0 - 2 * self.tick_length, py), label, font=font,
                               anchor='rm', fill=theme.tick_label_color)

    def _draw_axes(self, axes: Axes) -> None:
        for segment in _segments(self.to_pixels(axes.xvalues, axes.yvalues)):
            if len(segment) == 1:
                x, y = segment[0]
                r = axes.linewidth
                self.draw.ellipse((x - r, y - r, x + r, y + r), fill=axes.color)
            else:
                self.draw.line(segment, width=axes.linewidth, fill=axes.color, joint='curve')

    def render(self) -> None:
        self._create_empty_image()
        if self.axes:
            self._configure_grid_settings()
            self._draw_grid_and_ticks()
            for axes in self.axes:
                self._draw_axes(axes)
        self._draw_spines()

    def set_major_locator(self, locator: Optional[Locator], axis: str) -> None:
        """Fix the tick locator of 'x' or 'y'; None goes back to automatic ticks."""
        if axis not in self._locators:
            raise ValueError(f"axis must be 'x' or 'y', not {axis!r}")
        self._locators[axis] = locator

    def set_major_formatter(self, formatter: Optional[Formatter], axis: str) -> None:
        if axis not in self._formatters:
            raise ValueError(f"axis must be 'x' or 'y', not {axis!r}")
        self._formatters[axis] = formatter

    def plot(self, xvalues: ArrayLike, yvalues: ArrayLike, label: str = 'series',
             color: Optional[Tuple[int, ...]] = None, linewidth: int = 4) -> None:
        """
        Add a series and redraw. Non-finite samples break the line instead
        of ending the plot.

        """

        xvalues = np.asarray(xvalues, dtype=float).ravel()
        yvalues = np.asarray(yvalues, dtype=float).ravel()
        if xvalues.size != yvalues.size:
            raise ValueError('x and y differ in length')

        if color is None:
            palette = self.theme.line_colors
            color = palette[len(self.axes) % len(palette)]
        self.axes.append(Axes(xvalues, yvalues, color, linewidth, label))
        self.render()

    def title(self, text: str) -> None:
        if self.draw is None:
            self.render()
        font = get_font(self.theme.title_size_perc, self.width)
        height = get_text_dimensions(self.draw, text, font).height
        point = Point((self.box.x0 + self.box.x1) / 2, self.box.y0 - 2 * self.tick_length - height / 2)
        self.draw.text(point, text, font=font, anchor='mm', fill=self.theme.title_color)

    def legend(self, spacing: int = 8) -> None:
        """Legend in the upper right corner of the spines box."""
        if not self.axes:
            return
        if self.draw is None:
            self.render()
        font = get_font(self.theme.legend_size_perc, self.width)
        letter = get_text_dimensions(self.draw, 'b', font)
        widest = max(get_text_dimensions(self.draw, ax.label, font).width for ax in self.axes)

        right = self.box.x1 - letter.width
        left = right - widest - letter.width * 5
        top = self.box.y0 + letter.height
        bottom = top + len(self.axes) * (letter.height + spacing) + letter.height

        self.draw.rounded_rectangle((left, top, right, bottom), radius=12,
                                    fill=self.theme.figure_background_color,
                                    outline=self.theme.grid_line_color,
                                    width=self.theme.grid_line_width)
        for i, axes in enumerate(self.axes):
            y = top + letter.height + i * (letter.height + spacing)
            self.draw.line((left + letter.width, y, left + letter.width * 4, y),
                           width=axes.linewidth, fill=axes.color)
            self.draw.text((left + letter.width * 5, y), axes.label, font=font,
                           anchor='lm', fill=self.theme.legend_color)

    def save(self, path: Union[str, Path], autoclose: bool = True,
             resample: int = Image.BILINEAR) -> Path:
        if self.img is None:
            self.render()
        self.img = self.img.resize((self.width // 2, self.height // 2), resample=resample)
        self.img.save(path, compress_level=1)
        if autoclose:
            self.close()
        return Path(path)

    def close(self) -> None:
        if self.img is not None:
            self.img.close()
            self.img = None
            self.draw = None
        gc.collect()

#-------------------------------------------------------------------------------

def plot_report(report: ExperimentReport, directory: Union[str, Path],
                theme: Theme = StandardTheme) -> List[Path]:
    """One PNG per series of the report, named after the series."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)

    paths = []
    for name, (x, y) in sorted(report.series.items()):
        figure = SeriesFigure(theme=theme)
        figure.plot(x, y, label=name)
        figure.title(f'{report.name}: {name}')
        path = directory / Path(series_filename(name)).with_suffix('.png')
        paths.append(figure.save(path))
        logger.info('plot written: %s', path)
    return paths

#-------------------------------------------------------------------------------
