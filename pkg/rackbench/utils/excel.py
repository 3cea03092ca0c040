import io
from datetime import datetime

import pandas as pd
from openpyxl.styles import Alignment, Border, Font, PatternFill, Side

from rackbench.models import CellStatus, Table1

ROW_LABELS = {
    "complete": "K_n",
    "star": "K_{1,n-1}",
    "cycle": "C_n",
}


def table1_dataframe(table: Table1) -> pd.DataFrame:
    """
    Table 1 as a DataFrame: one row per family, one column per order n.

    Args:
        table: Census results per family

    Returns:
        DataFrame of "(mu_rack,mu_qnd)" strings, "?" and "-" cells
    """
    data = {
        ROW_LABELS[family]: [cell.text() for cell in cells]
        for family, cells in table.rows.items()
    }
    df = pd.DataFrame.from_dict(data, orient="index", columns=[f"n={n}" for n in range(table.columns)])
    df.index.name = "family"
    return df


def render_table1(table: Table1) -> str:
    return table1_dataframe(table).to_string() + "\n"


def generate_csv_report(table: Table1) -> str:
    return table1_dataframe(table).to_csv()


def generate_excel_report(table: Table1, generated_at: datetime) -> io.BytesIO:
    """
    Write Table 1 to a styled workbook with a summary sheet.

    Args:
        table: Census results per family
        generated_at: Timestamp shown on the summary sheet

    Returns:
        BytesIO buffer containing the Excel file
    """
    df = table1_dataframe(table).reset_index()
    output = io.BytesIO()

    with pd.ExcelWriter(output, engine="openpyxl") as writer:
        df.to_excel(writer, sheet_name="Table 1", index=False)
        workbook = writer.book
        worksheet = writer.sheets["Table 1"]

        header_fill = PatternFill(start_color="1F4E79", end_color="1F4E79", fill_type="solid")
        header_font = Font(color="FFFFFF", bold=True)
        thin_border = Border(
            left=Side(style="thin"),
            right=Side(style="thin"),
            top=Side(style="thin"),
            bottom=Side(style="thin"),
        )
        for cell in worksheet[1]:
            cell.fill = header_fill
            cell.font = header_font
            cell.border = thin_border
            cell.alignment = Alignment(horizontal="center", vertical="center")

        unknown_fill = PatternFill(start_color="FFA500", end_color="FFA500", fill_type="solid")
        for row in worksheet.iter_rows(min_row=2, max_row=len(df) + 1):
            for cell in row:
                cell.border = thin_border
                cell.alignment = Alignment(horizontal="center", vertical="center")
                if cell.value == CellStatus.UNKNOWN.value:
                    cell.fill = unknown_fill

        worksheet.column_dimensions["A"].width = 14
        for col_idx in range(2, table.columns + 2):
            worksheet.column_dimensions[worksheet.cell(row=1, column=col_idx).column_letter].width = 12
        worksheet.freeze_panes = "B2"

        summary_ws = workbook.create_sheet("Summary")
        cells = [cell for row in table.rows.values() for cell in row]
        summary_data = [
            ["Rack and quandle marking counts"],
            [""],
            ["Generated At:", generated_at.strftime("%Y-%m-%d %H:%M:%S UTC")],
            [""],
            ["Computed cells:", sum(1 for c in cells if c.status == CellStatus.OK)],
            ["Unknown cells:", sum(1 for c in cells if c.status == CellStatus.UNKNOWN)],
            ["Undefined cells:", sum(1 for c in cells if c.status == CellStatus.UNDEFINED)],
        ]
        for row_idx, row_data in enumerate(summary_data, start=1):
            for col_idx, value in enumerate(row_data, start=1):
                cell = summary_ws.cell(row=row_idx, column=col_idx, value=value)
                if row_idx == 1:
                    cell.font = Font(bold=True, size=14)
                elif col_idx == 1 and row_idx > 2:
                    cell.font = Font(bold=True)

        summary_ws.column_dimensions["A"].width = 20
        summary_ws.column_dimensions["B"].width = 30

    output.seek(0)
    return output
