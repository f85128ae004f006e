int get_item(const int *items, int count, int idx)
{
    if (idx < 0 || idx >= count)
        return 0;
    return items[idx];
}
