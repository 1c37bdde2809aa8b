# -*- coding: utf-8 -*-

from kdvdecay.base import ExperimentReport
from kdvdecay.figure import SeriesFigure, plot_report, _segments
from kdvdecay.themes import StandardTheme, DarkTheme
from kdvdecay.ticker import AutoLocator, NullFormatter, ScalarFormatter
from pathlib import Path
from PIL import Image
import tempfile
import unittest
import numpy as np

#-----------------------------------------------------------------------------

class TestFigure(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.root = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    #-------------------------------------------------------------------------

    def test_plot_limits(self):
        fig = SeriesFigure(size=(300, 200))
        fig.plot([0, 1, 2], [0, 1, 4])
        limits = fig.limits
        fig.close()

        self.assertTupleEqual(limits, ((0.0, 2.0), (0.0, 4.0)))

    def test_auto_ticks_follow_every_series(self):
        fig = SeriesFigure(size=(300, 200))
        fig.plot([0.0, 1e-6], [0.0, 1e-6])
        fig.plot([0.0, 100.0], [0.0, 50.0])
        x_ticks, formatter = fig.x_ticks, fig.x_formatter
        fig.close()

        with self.subTest('ticks'):
            self.assertGreater(float(np.max(x_ticks)), 50.0)

        with self.subTest('formatter'):
            self.assertIsInstance(formatter, ScalarFormatter)
            self.assertGreaterEqual(formatter.span, 100.0)

    def test_user_formatter_survives_render(self):
        fig = SeriesFigure(size=(300, 200))
        formatter, locator = NullFormatter(), AutoLocator(nbins=3)
        fig.set_major_formatter(formatter, 'y')
        fig.set_major_locator(locator, 'x')
        fig.plot([0, 1], [0, 1])
        fig.plot([0, 10], [0, 10])
        active = (fig.y_formatter, fig.x_locator, fig.x_formatter)
        fig.close()

        with self.subTest('user'):
            self.assertIs(active[0], formatter)
            self.assertIs(active[1], locator)

        with self.subTest('auto'):
            self.assertIsInstance(active[2], ScalarFormatter)

    def test_set_major_locator_bad_axis(self):
        fig = SeriesFigure(size=(300, 200))
        with self.assertRaises(ValueError):
            fig.set_major_locator(AutoLocator(), 'z')

    def test_to_pixels(self):
        fig = SeriesFigure(size=(300, 200))
        fig.plot([0, 1, 2], [0, 1, 4])
        corners = fig.to_pixels([0, 2], [0, 4])
        box = fig.box
        fig.close()

        self.assertTrue(np.allclose(corners, [[box.x0, box.y1], [box.x1, box.y0]]))

    def test_plot_length_mismatch(self):
        fig = SeriesFigure(size=(300, 200))
        with self.assertRaises(ValueError):
            fig.plot([0, 1, 2], [0, 1])
        fig.close()

    def test_line_colors_cycle(self):
        fig = SeriesFigure(size=(300, 200))
        fig.plot([0, 1], [0, 1])
        fig.plot([0, 1], [1, 0])
        colors = [axes.color for axes in fig.axes]
        fig.close()

        self.assertListEqual(colors, list(StandardTheme.line_colors[:2]))

    def test_segments(self):
        points = np.asarray([[0.0, 0.0], [1.0, np.nan], [2.0, 2.0], [3.0, 3.0]])
        self.assertListEqual(_segments(points), [[(0.0, 0.0)], [(2.0, 2.0), (3.0, 3.0)]])

    def test_theme_background(self):
        fig = SeriesFigure(size=(300, 200), theme=DarkTheme)
        fig.plot([0, 1], [0, 1])
        pixel = fig.img.getpixel((0, 0))
        fig.close()

        self.assertTupleEqual(pixel, DarkTheme.figure_background_color)

    def test_save(self):
        fig = SeriesFigure(size=(300, 200))
        fig.plot([0, 1, 2, 3], [1.0, np.nan, 0.5, np.inf], label='gappy')
        fig.title('gaps')
        fig.legend()
        path = fig.save(self.root / 'gaps.png')

        with self.subTest():
            self.assertIsNone(fig.img)

        with Image.open(path) as img:
            with self.subTest():
                self.assertTupleEqual(img.size, (300, 200))

    def test_empty_figure(self):
        fig = SeriesFigure(size=(300, 200))
        fig.legend()
        path = fig.save(self.root / 'empty.png')
        self.assertTrue(path.exists())

    #-------------------------------------------------------------------------

    def test_plot_report(self):
        report = ExperimentReport('persistence_kato', 'run-1')
        report.series['weighted norm'] = (np.linspace(0.0, 1.0, 11), np.exp(np.linspace(0.0, 0.1, 11)))
        report.series['K'] = (np.asarray([1.0]), np.asarray([0.1]))
        paths = plot_report(report, self.root / 'plots')
        self.assertListEqual([p.name for p in paths], ['K.png', 'weighted_norm.png'])

#-----------------------------------------------------------------------------
