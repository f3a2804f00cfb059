"""
@file report_pdf.py
@brief PDF summary of sweeps and lemma runs (fpdf), with DejaVu fonts when available.
"""

from typing import List, Sequence
import os
from fpdf import FPDF

from utilits.logger import analysis_logger


class PDFReport(FPDF):
    def __init__(self, title: str = "Fair division report"):
        super().__init__(orientation="P", unit="mm", format="A4")
        self.set_auto_page_break(auto=True, margin=12)
        self.logger = analysis_logger.get_logger("PDFReport")

        fonts_dir = os.path.join(os.path.dirname(__file__), "fonts")
        reg = os.path.join(fonts_dir, "DejaVuSans.ttf")
        bold = os.path.join(fonts_dir, "DejaVuSans-Bold.ttf")

        self._use_dejavu = False

        try:
            if os.path.exists(reg) and os.path.exists(bold):
                self.add_font("DejaVu", "", reg, uni=True)
                self.add_font("DejaVu", "B", bold, uni=True)
                self._use_dejavu = True
            else:
                self.logger.info(f"DejaVu fonts not found in {fonts_dir}, using Helvetica")
        except Exception as e:
            self.logger.warning(f"Error loading DejaVu fonts: {e}")
            self._use_dejavu = False

        self.set_font(self._family, size=12)

        self.title = title
        self.add_page()

        self.set_font(self._family, "B", 16)
        self.cell(0, 10, self._safe(self.title), ln=1, align="C")
        self.ln(2)

    @property
    def _family(self) -> str:
        return "DejaVu" if self._use_dejavu else "Helvetica"

    def _safe(self, s: str) -> str:
        """
        @brief Make text safe for PDF output; the core fonts only cover latin-1.
        @param s Input string
        @return str sanitized
        """
        if s is None:
            return ""
        s = s.replace("—", "-").replace("≤", "<=").replace("≥", ">=")
        if not self._use_dejavu:
            s = s.encode("latin-1", "replace").decode("latin-1")
        return s

    def footer(self):
        self.set_y(-15)
        self.set_font(self._family, "", 8)
        self.set_text_color(120, 120, 120)
        self.cell(0, 10, self._safe(f"{self.title}  |  {self.page_no()}"), align="R")
        self.set_text_color(0, 0, 0)

    def add_section(self, heading: str, body: str, fixed_width: bool = True):
        """
        @brief One page per section; body lines keep their column alignment
               (Courier unless DejaVu is available).
        """
        self.add_page()
        self.set_font(self._family, "B", 13)
        self.multi_cell(0, 7, self._safe(heading))
        self.ln(2)
        family = "Courier" if fixed_width and not self._use_dejavu else self._family
        self.set_font(family, "", 9)
        for line in (body or "").splitlines():
            self.multi_cell(0, 4.5, self._safe(line) or " ")

    def add_table(self, title: str, headers: Sequence[str], rows: List[Sequence[str]], width: float = 190.0):
        """
        @brief Plain grid table with equal column widths.
        """
        if not headers:
            return
        self.ln(4)
        self.set_font(self._family, "B", 12)
        self.multi_cell(0, 7, self._safe(title))
        self.ln(1)
        col_w = width / len(headers)
        self.set_font(self._family, "B", 9)
        for h in headers:
            self.cell(col_w, 6, self._safe(str(h)), border=1, align="C")
        self.ln()
        self.set_font(self._family, "", 9)
        for row in rows:
            for value in row:
                self.cell(col_w, 6, self._safe(str(value)), border=1)
            self.ln()
