import calendar
import datetime
import re
from dataclasses import dataclass

from core.exceptions import UsageError


MONTH_ABBREVIATIONS = {
    name.lower(): number
    for number, name in enumerate(calendar.month_abbr) if name
}

ISO_MONTH_RE = re.compile(r'^(?P<year>\d{4})-(?P<month>\d{1,2})$')
SHORT_MONTH_RE = re.compile(r'^(?P<name>[A-Za-z]{3})-(?P<year>\d{2}|\d{4})$')


@dataclass(frozen=True, order=True)
class YearMonth:
    """A calendar month, ordered chronologically"""
    year: int
    month: int

    def __post_init__(self):
        if not 1 <= self.month <= 12:
            raise UsageError(f'Month out of range: {self.month}')

    @classmethod
    def parse(cls, text):
        """Parse 'YYYY-MM' or the short 'Mon-YY' form"""
        text = str(text).strip()
        match = ISO_MONTH_RE.match(text)
        if match:
            return cls(int(match['year']), int(match['month']))
        match = SHORT_MONTH_RE.match(text)
        if match and match['name'].lower() in MONTH_ABBREVIATIONS:
            year = int(match['year'])
            if year < 100:
                year += 2000
            return cls(year, MONTH_ABBREVIATIONS[match['name'].lower()])
        raise UsageError(f'Invalid month: {text!r} (expected YYYY-MM)')

    @classmethod
    def of(cls, day):
        return cls(day.year, day.month)

    @property
    def first_day(self):
        return datetime.date(self.year, self.month, 1)

    @property
    def last_day(self):
        return datetime.date(self.year, self.month, self.days)

    @property
    def days(self):
        return calendar.monthrange(self.year, self.month)[1]

    def shift(self, months):
        index = self.year * 12 + (self.month - 1) + months
        return YearMonth(index // 12, index % 12 + 1)

    def next(self):
        return self.shift(1)

    def previous(self):
        return self.shift(-1)

    def months_until(self, other):
        """Months from self to other, negative if other is earlier"""
        return (other.year - self.year) * 12 + (other.month - self.month)

    def contains(self, day):
        return day is not None and (day.year, day.month) == (
            self.year, self.month)

    def __str__(self):
        return f'{self.year:04d}-{self.month:02d}'


def month_range(start, end):
    """Every month from start to end inclusive, in order"""
    if start > end:
        raise UsageError(f'Month range is empty: {start} is after {end}')
    months = []
    current = start
    while current <= end:
        months.append(current)
        current = current.next()
    return months


def add_months(day, months):
    """Shift a date by calendar months, clamping to the month's last day"""
    target = YearMonth.of(day).shift(months)
    return datetime.date(target.year, target.month, min(day.day, target.days))
