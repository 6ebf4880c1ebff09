'''Log-log error plot as a self-contained SVG 1.1 document'''
import daiquiri
import jinja2
import numpy as np

log = daiquiri.getLogger(__name__)

WIDTH = 640
HEIGHT = 480
MARGIN = {'left': 80, 'right': 30, 'top': 50, 'bottom': 70}
COLORS = ('#1f77b4', '#d62728', '#2ca02c', '#9467bd')

SVG_TEMPLATE = jinja2.Template('''<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{{ width }}" height="{{ height }}" viewBox="0 0 {{ width }} {{ height }}">
<rect x="0" y="0" width="{{ width }}" height="{{ height }}" fill="white"/>
<line class="axis" x1="{{ x0 }}" y1="{{ y0 }}" x2="{{ x1 }}" y2="{{ y0 }}" stroke="black"/>
<line class="axis" x1="{{ x0 }}" y1="{{ y0 }}" x2="{{ x0 }}" y2="{{ y1 }}" stroke="black"/>
{% for tick in xticks %}<text x="{{ tick.x }}" y="{{ y0 + 18 }}" font-size="12" text-anchor="middle">{{ tick.label }}</text>
{% endfor %}{% for tick in yticks %}<text x="{{ x0 - 8 }}" y="{{ tick.y }}" font-size="12" text-anchor="end">{{ tick.label }}</text>
{% endfor %}<text x="{{ (x0 + x1) / 2 }}" y="{{ height - 20 }}" font-size="14" text-anchor="middle">log₂(h)</text>
<text x="20" y="{{ (y0 + y1) / 2 }}" font-size="14" text-anchor="middle" transform="rotate(-90 20 {{ (y0 + y1) / 2 }})">log₂(error)</text>
{% for series in data %}<polyline class="data" fill="none" stroke="{{ series.color }}" stroke-width="2" points="{{ series.points }}"/>
{% for marker in series.markers %}<circle cx="{{ marker[0] }}" cy="{{ marker[1] }}" r="3" fill="{{ series.color }}"/>
{% endfor %}<text x="{{ x1 - 10 }}" y="{{ series.legend_y }}" font-size="12" text-anchor="end" fill="{{ series.color }}">{{ series.name }}</text>
{% endfor %}{% if fit %}<polyline class="fit" fill="none" stroke="black" stroke-dasharray="6 4" points="{{ fit }}"/>
{% endif %}<text x="{{ x0 + 10 }}" y="{{ y1 - 15 }}" font-size="13">{{ annotation }}</text>
</svg>
''')


def _fmt(value):
    return f'{value:.2f}'


def _range(values):
    low, high = float(np.min(values)), float(np.max(values))
    if high - low < 1e-12:
        low, high = low - 0.5, high + 0.5
    pad = 0.05 * (high - low)
    return low - pad, high + pad


def render_error_plot(tables, rate=None, path=None):
    '''SVG of log2(error) against log2(h): one polyline per table and the fitted line of ``rate``

    ``tables`` maps a scheme name to its ErrorTable; rows with zero error are
    left out since they have no logarithm.
    '''
    series = []
    for name, table in tables.items():
        rows = [row for row in table if row.l2_error > 0.0]
        series.append((name, np.log2([r.h for r in rows]), np.log2([r.l2_error for r in rows])))

    all_x = np.concatenate([s[1] for s in series] + [np.zeros(0)])
    all_y = np.concatenate([s[2] for s in series] + [np.zeros(0)])
    if all_x.size == 0:
        all_x, all_y = np.array([0.0]), np.array([0.0])
    x_low, x_high = _range(all_x)
    y_low, y_high = _range(all_y)

    x0, x1 = MARGIN['left'], WIDTH - MARGIN['right']
    y0, y1 = HEIGHT - MARGIN['bottom'], MARGIN['top']

    def px(x):
        return x0 + (x - x_low) / (x_high - x_low) * (x1 - x0)

    def py(y):
        return y0 - (y - y_low) / (y_high - y_low) * (y0 - y1)

    data = []
    for k, (name, xs, ys) in enumerate(series):
        markers = [(_fmt(px(x)), _fmt(py(y))) for x, y in zip(xs, ys)]
        data.append({
            'name': name,
            'color': COLORS[k % len(COLORS)],
            'points': ' '.join(f'{mx},{my}' for mx, my in markers),
            'markers': markers,
            'legend_y': _fmt(y1 + 20 + 16 * k),
        })

    fit = None
    annotation = ''
    if rate is not None:
        ends = [x_low, x_high]
        fit = ' '.join(f'{_fmt(px(x))},{_fmt(py(rate.slope * x + rate.intercept))}' for x in ends)
        annotation = f'empirical slope {rate.slope:.3f} / theoretical min{{1−2β,1−α}} = {rate.theoretical:.3f}'

    xticks = [{'x': _fmt(px(v)), 'label': f'{v:g}'} for v in range(int(np.ceil(x_low)), int(np.floor(x_high)) + 1)]
    yticks = [{'y': _fmt(py(v)), 'label': f'{v:g}'} for v in range(int(np.ceil(y_low)), int(np.floor(y_high)) + 1)]

    svg = SVG_TEMPLATE.render(
        width=WIDTH, height=HEIGHT, x0=x0, x1=x1, y0=y0, y1=y1,
        xticks=xticks, yticks=yticks, data=data, fit=fit, annotation=annotation,
    )
    if path is not None:
        with open(path, 'w', encoding='utf-8', newline='\n') as handle:
            handle.write(svg)
        log.info('error plot written', path=str(path), series=len(data))
    return svg
