from django.conf import settings

from core.months import YearMonth


DEFAULTS = {
    'POPULATION': 3000000,
    'REGION': 'study-region',
    'SEED': 42,
    'TRAIN_FRACTION': 0.7,
    'GBM': {
        'n_trees': 100,
        'max_depth': 3,
        'learning_rate': 0.1,
        'min_leaf': 20,
    },
    'BASELINE_WINDOW': ('2019-08', '2020-02'),
    'UTILIZATION_K': 2.0,
    'EXCLUDED_STATUSES': (),
    'REPORT_DIGITS': 6,
    'CATEGORICAL_ONE_HOT_LIMIT': 32,
}


def fraud_settings():
    """Project settings merged over the defaults"""
    configured = getattr(settings, 'FRAUDSCOPE', {})
    merged = dict(DEFAULTS)
    merged.update(configured)
    merged['GBM'] = {**DEFAULTS['GBM'], **configured.get('GBM', {})}
    return merged


def baseline_window():
    start, end = fraud_settings()['BASELINE_WINDOW']
    return YearMonth.parse(start), YearMonth.parse(end)
